#include "fpr/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "fpr/error.hpp"
#include "fpr/evaluate.hpp"
#include "fpr/format.hpp"
#include "fpr/paths.hpp"
#include "fpr/scenario.hpp"

namespace fpr {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& options) {
  if (options.k_list.empty() || options.n_list.empty()) {
    throw Error(ErrorKind::kInvalidInput, "k-list and n-list must be non-empty");
  }
  if (options.repeats < 1) throw Error(ErrorKind::kInvalidInput, "repeats must be >= 1");
  if (options.scenes < 1) throw Error(ErrorKind::kInvalidInput, "scenes must be >= 1");
  for (int k : options.k_list) {
    if (k < 1) throw Error(ErrorKind::kInvalidInput, "every K must be >= 1");
  }
  for (int n : options.n_list) {
    if (n < 1) throw Error(ErrorKind::kInvalidInput, "every N must be >= 1");
  }
  const int k_max = *std::max_element(options.k_list.begin(), options.k_list.end());
  const int n_max = *std::max_element(options.n_list.begin(), options.n_list.end());

  // Each path is timed under every K back to back, so slow drift in
  // machine speed lands on every K alike.
  struct Samples {
    std::vector<double> pre, fpr, exact;
  };
  const std::size_t nk = options.k_list.size();
  std::vector<Samples> samples(nk * options.n_list.size());
  auto record = [&](std::size_t ki, int p, std::vector<double> Samples::*what, double ms) {
    for (std::size_t ni = 0; ni < options.n_list.size(); ++ni) {
      if (p < options.n_list[ni]) (samples[ki * options.n_list.size() + ni].*what).push_back(ms);
    }
  };
  double sink = 0.0;
  for (int sc = 0; sc < options.scenes; ++sc) {
    Scenario scene =
        generate_scenario(ScenarioTemplate::kRandom, k_max, options.std_dev, options.seed + sc);
    scene.start = Pose2(-15.0, 0.0, 0.0);
    scene.goal = Pose2(15.0, 0.0, 0.0);
    const std::vector<Path> paths = generate_paths(scene.start, scene.goal,
                                                   static_cast<std::size_t>(n_max), Kinematics{},
                                                   options.seed + sc, {}, scene.robot);
    const GridSpec grid = auto_grid(scene, paths, options.resolution, options.sigma_cells);
    const int pad = static_cast<int>(std::ceil(4.0 * options.sigma_cells)) + 2;
    std::vector<SweptArea> sweeps;
    for (const Path& p : paths) sweeps.push_back(sweep(p, scene.robot, grid, pad));

    const int used = std::min<int>(n_max, static_cast<int>(sweeps.size()));
    for (int r = 0; r < options.repeats; ++r) {
      std::vector<RiskFields> fields;
      for (std::size_t ki = 0; ki < nk; ++ki) {
        const auto t0 = Clock::now();
        fields.push_back(precompute_fields(std::span(scene.obstacles.data(), options.k_list[ki]), grid,
                                           options.sigma_cells));
        const double ms = ms_since(t0);
        for (std::size_t ni = 0; ni < options.n_list.size(); ++ni) {
          samples[ki * options.n_list.size() + ni].pre.push_back(ms);
        }
      }
      for (int p = 0; p < used; ++p) {
        // The K order rotates per path so no K always runs on a cold cache.
        for (std::size_t step = 0; step < nk; ++step) {
          const std::size_t ki = (step + static_cast<std::size_t>(p)) % nk;
          const auto t0 = Clock::now();
          sink += fpr_bound(sweeps[p].indicator, fields[ki]);
          record(ki, p, &Samples::fpr, ms_since(t0));
        }
        if (!options.exact) continue;
        for (std::size_t step = 0; step < nk; ++step) {
          const std::size_t ki = (step + static_cast<std::size_t>(p)) % nk;
          const auto t0 = Clock::now();
          const std::vector<double> per =
              exact_per_obstacle(sweeps[p], std::span(scene.obstacles.data(), options.k_list[ki]));
          sink += exact_total(per).p_d;
          record(ki, p, &Samples::exact, ms_since(t0));
        }
      }
    }
  }
  if (!std::isfinite(sink)) throw Error(ErrorKind::kNumerical, "non-finite bench result");

  std::vector<BenchRow> rows;
  std::size_t cell = 0;
  for (int k : options.k_list) {
    for (int n : options.n_list) {
      const Samples& sm = samples[cell++];
      rows.push_back({k, n, "fpr", median(sm.pre), median(sm.fpr)});
      if (options.exact) rows.push_back({k, n, "exact", 0.0, median(sm.exact)});
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "k,n,method,precompute_ms,per_path_ms\n";
  for (const BenchRow& r : rows) {
    out += std::to_string(r.k) + "," + std::to_string(r.n) + "," + r.method + "," +
           shortest(r.precompute_ms) + "," + shortest(r.per_path_ms) + "\n";
  }
  return out;
}

}  // namespace fpr
