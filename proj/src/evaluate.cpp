#include "fpr/evaluate.hpp"

#include <chrono>
#include <cmath>

#include "fpr/error.hpp"
#include "fpr/rng.hpp"

namespace fpr {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int sweep_pad(double sigma_cells) { return static_cast<int>(std::ceil(4.0 * sigma_cells)) + 2; }

}  // namespace

std::vector<double> exact_per_obstacle(const SweptArea& swept,
                                       std::span<const Obstacle> obstacles) {
  std::vector<double> out;
  out.reserve(obstacles.size());
  for (const Obstacle& o : obstacles) {
    if (is_point_obstacle(o.effective_shape(), swept.grid.resolution)) {
      out.push_back(std::min(1.0, point_bound(std::span(&o.density, 1), swept.indicator)));
    } else {
      out.push_back(laugier_exact(swept, o));
    }
  }
  return out;
}

Evaluation evaluate_paths(const Scenario& scenario, std::span<const Path> paths,
                          const EvalOptions& options) {
  Evaluation ev;
  const double res = scenario.resolution.value_or(options.resolution);
  ev.grid = resolve_grid(scenario, paths, res, options.sigma_cells);

  std::vector<Obstacle> finite;
  std::vector<LocationDensity> points;
  for (const Obstacle& o : scenario.obstacles) {
    if (is_point_obstacle(o.effective_shape(), ev.grid.resolution)) {
      points.push_back(o.density);
      ev.warnings.push_back("obstacle '" + o.id + "' is below one cell; using the point bound");
    } else {
      finite.push_back(o);
    }
  }

  const auto t0 = Clock::now();
  ev.fields = precompute_fields(finite, ev.grid, options.sigma_cells);
  ev.point_g = point_field(points, ev.grid);
  ev.precompute_ms = ms_since(t0);
  if (ev.fields.max_truncation > 1e-3) {
    ev.warnings.push_back("obstacle density mass truncated by the grid (fraction " +
                          std::to_string(ev.fields.max_truncation) + ")");
  }

  std::vector<Polygon> swept_polys;
  for (std::size_t n = 0; n < paths.size(); ++n) {
    const Path& path = paths[n];
    RiskReport r;
    r.path_id = path.id;
    try {
      const SweptArea swept =
          sweep(path, scenario.robot, ev.grid, sweep_pad(options.sigma_cells));
      auto t1 = Clock::now();
      r.f_d = fpr_bound(swept.indicator, ev.fields);
      if (!points.empty()) r.f_d += integrate_product(swept.indicator, ev.point_g);
      r.eval_ms = ms_since(t1);
      if (!std::isfinite(r.f_d)) {
        throw Error(ErrorKind::kNumerical, "non-finite bound for path '" + path.id + "'");
      }
      if (options.exact) {
        t1 = Clock::now();
        const std::vector<double> per = exact_per_obstacle(swept, scenario.obstacles);
        const ExactTotal tot = exact_total(per);
        r.exact_ms = ms_since(t1);
        r.p_d_exact = tot.p_d;
        r.p_d_bar = tot.p_d_bar;
      }
      if (options.mc) {
        swept_polys = posed_footprints(swept.poses, scenario.robot);
        r.mc = mc_total(swept_polys, scenario.obstacles, options.samples,
                        splitmix64(options.seed + n));
      }
    } catch (const Error& e) {
      RiskReport failed;
      failed.path_id = path.id;
      failed.error = e.what();
      failed.error_kind = e.kind();
      r = std::move(failed);
    }
    ev.reports.push_back(std::move(r));
  }
  return ev;
}

}  // namespace fpr
