// Command-line front end: evaluate, bench, render, gen-scenario.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fpr/bench.hpp"
#include "fpr/error.hpp"
#include "fpr/evaluate.hpp"
#include "fpr/format.hpp"
#include "fpr/paths.hpp"
#include "fpr/render.hpp"
#include "fpr/scenario.hpp"

namespace {

int exit_code(fpr::ErrorKind kind) {
  switch (kind) {
    case fpr::ErrorKind::kNumerical:
      return 2;
    case fpr::ErrorKind::kGenerationFailed:
    case fpr::ErrorKind::kPlacementFailed:
      return 3;
    default:
      return 1;
  }
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw fpr::Error(fpr::ErrorKind::kInvalidInput, "cannot create directory '" + dir + "'");
}

std::string read_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw fpr::Error(fpr::ErrorKind::kInvalidInput, "cannot open '" + file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// path_id -> f_d from a risk CSV.
std::map<std::string, double> read_risk_csv(const std::string& file) {
  std::istringstream in(read_file(file));
  std::string line;
  if (!std::getline(in, line)) return {};
  const std::vector<std::string> head = split(line, ',');
  int id_col = -1, fd_col = -1;
  for (std::size_t c = 0; c < head.size(); ++c) {
    if (head[c] == "path_id") id_col = static_cast<int>(c);
    if (head[c] == "f_d") fd_col = static_cast<int>(c);
  }
  if (id_col < 0 || fd_col < 0) {
    throw fpr::Error(fpr::ErrorKind::kParse, "risk CSV needs path_id and f_d columns");
  }
  std::map<std::string, double> out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (static_cast<int>(cells.size()) <= std::max(id_col, fd_col)) {
      throw fpr::Error(fpr::ErrorKind::kParse, "risk CSV line " + std::to_string(row) + ": too few columns");
    }
    if (cells[fd_col].empty()) continue;
    try {
      out[cells[id_col]] = std::stod(cells[fd_col]);
    } catch (const std::exception&) {
      throw fpr::Error(fpr::ErrorKind::kParse, "risk CSV line " + std::to_string(row) + ": bad f_d");
    }
  }
  return out;
}

std::string risk_csv(const std::vector<fpr::RiskReport>& reports, bool timings) {
  std::string out = "path_id,f_d,p_d_exact,p_d_mc,mc_stderr,eval_ms\n";
  for (const fpr::RiskReport& r : reports) {
    out += r.path_id + ",";
    if (r.ok()) {
      out += fpr::shortest(r.f_d);
      out += ",";
      if (r.p_d_exact) out += fpr::shortest(*r.p_d_exact);
      out += ",";
      if (r.mc) out += fpr::shortest(r.mc->p_hat) + "," + fpr::shortest(r.mc->std_error);
      else out += ",";
      out += ",";
      if (timings) out += fpr::shortest(r.eval_ms);
    } else {
      out += ",,,,";
    }
    out += "\n";
  }
  return out;
}

struct EvaluateArgs {
  std::string scenario;
  std::string paths;
  int gen = 0;
  bool exact = false;
  bool mc = false;
  std::size_t samples = 100000;
  std::optional<std::uint64_t> seed;
  double sigma_cells = 2.0;
  double resolution = 0.05;
  std::string out;
  std::string save_paths;
  bool timings = false;
  bool render = false;
};

int run_evaluate(const EvaluateArgs& a) {
  const fpr::Scenario sc = fpr::load_scenario(a.scenario);
  const std::uint64_t seed = a.seed.value_or(sc.seed);
  std::vector<fpr::Path> paths;
  if (!a.paths.empty()) {
    paths = fpr::load_paths(a.paths);
  } else {
    paths = fpr::generate_paths(sc.start, sc.goal, static_cast<std::size_t>(a.gen),
                                fpr::Kinematics{}, seed, sc.obstacles, sc.robot);
  }

  fpr::EvalOptions opt;
  opt.sigma_cells = a.sigma_cells;
  opt.resolution = a.resolution;
  opt.exact = a.exact;
  opt.mc = a.mc;
  opt.samples = a.samples;
  opt.seed = seed;
  const fpr::Evaluation ev = fpr::evaluate_paths(sc, paths, opt);
  for (const std::string& w : ev.warnings) std::cerr << "warning: " << w << "\n";

  int rc = 0;
  for (const fpr::RiskReport& r : ev.reports) {
    if (r.ok()) continue;
    std::cerr << "error: path '" << r.path_id << "': " << r.error << "\n";
    rc = std::max(rc, exit_code(r.error_kind));
  }

  const std::string csv = risk_csv(ev.reports, a.timings);
  if (!a.save_paths.empty()) fpr::write_file_atomic(a.save_paths, fpr::dump_paths(paths));
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    ensure_dir(a.out);
    fpr::write_file_atomic(join(a.out, "risk.csv"), csv);
    if (a.paths.empty()) fpr::write_file_atomic(join(a.out, "paths.json"), fpr::dump_paths(paths));
    if (a.render) {
      std::map<std::string, double> risk;
      for (const fpr::RiskReport& r : ev.reports) {
        if (r.ok()) risk[r.path_id] = r.f_d;
      }
      fpr::write_file_atomic(join(a.out, "g.ppm"), fpr::encode_ppm(fpr::heatmap(ev.fields.g)));
      fpr::write_file_atomic(join(a.out, "dg.ppm"),
                             fpr::encode_ppm(fpr::heatmap(ev.fields.dg_sigma)));
      fpr::write_file_atomic(join(a.out, "paths.ppm"),
                             fpr::encode_ppm(fpr::risk_map(sc, ev.grid, paths, risk, nullptr)));
    }
  }
  return rc;
}

struct RenderArgs {
  std::string scenario;
  std::string paths;
  std::string risk;
  std::string out;
  double sigma_cells = 2.0;
  double resolution = 0.05;
};

int run_render(const RenderArgs& a) {
  const fpr::Scenario sc = fpr::load_scenario(a.scenario);
  std::vector<fpr::Path> paths;
  if (!a.paths.empty()) paths = fpr::load_paths(a.paths);
  const std::map<std::string, double> risk =
      a.risk.empty() ? std::map<std::string, double>{} : read_risk_csv(a.risk);
  const fpr::GridSpec grid =
      fpr::resolve_grid(sc, paths, sc.resolution.value_or(a.resolution), a.sigma_cells);
  std::vector<fpr::Obstacle> finite;
  for (const fpr::Obstacle& o : sc.obstacles) {
    if (!fpr::is_point_obstacle(o.effective_shape(), grid.resolution)) finite.push_back(o);
  }
  const fpr::RiskFields rf = fpr::precompute_fields(finite, grid, a.sigma_cells);
  std::vector<std::string> missing;
  const fpr::Image map = fpr::risk_map(sc, grid, paths, risk, &missing);
  if (!a.risk.empty()) {
    for (const std::string& id : missing) {
      std::cerr << "warning: path '" << id << "' has no risk value; drawn gray\n";
    }
  }
  ensure_dir(a.out);
  fpr::write_file_atomic(join(a.out, "g.ppm"), fpr::encode_ppm(fpr::heatmap(rf.g)));
  fpr::write_file_atomic(join(a.out, "dg.ppm"), fpr::encode_ppm(fpr::heatmap(rf.dg_sigma)));
  fpr::write_file_atomic(join(a.out, "paths.ppm"), fpr::encode_ppm(map));
  return 0;
}

struct GenArgs {
  std::string tmpl = "carpark";
  int k = 35;
  std::optional<double> std_dev;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen_scenario(const GenArgs& a) {
  const bool carpark = a.tmpl == "carpark";
  const fpr::Scenario sc = fpr::generate_scenario(
      carpark ? fpr::ScenarioTemplate::kCarpark : fpr::ScenarioTemplate::kRandom, a.k,
      a.std_dev.value_or(carpark ? 0.3 : 0.7), a.seed);
  const std::string text = fpr::dump_scenario(sc);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    fpr::write_file_atomic(a.out, text);
  }
  return 0;
}

struct BenchArgs {
  fpr::BenchOptions opt;
  std::string out;
  bool no_exact = false;
};

int run_bench(BenchArgs a) {
  a.opt.exact = !a.no_exact;
  const std::string csv = fpr::bench_csv(fpr::run_bench(a.opt));
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    fpr::write_file_atomic(a.out, csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Upper bounds on robot-obstacle collision risk for candidate paths"};
  app.require_subcommand(1);

  EvaluateArgs ev;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Bound the collision risk of each path");
  evaluate->add_option("scenario", ev.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  auto* paths_opt = evaluate->add_option("--paths", ev.paths, "Path JSON file")->check(CLI::ExistingFile);
  auto* gen_opt = evaluate->add_option("--gen", ev.gen, "Generate N paths")->check(CLI::PositiveNumber);
  paths_opt->excludes(gen_opt);
  evaluate->add_flag("--exact", ev.exact, "Add the exact probability column");
  evaluate->add_flag("--mc", ev.mc, "Add a Monte-Carlo estimate");
  evaluate->add_option("--samples", ev.samples, "Monte-Carlo samples")->capture_default_str();
  evaluate->add_option("--seed", ev.seed, "Seed (default: scenario seed)");
  evaluate->add_option("--sigma-cells", ev.sigma_cells, "Ridge smoothing in cells")
      ->capture_default_str()->check(CLI::PositiveNumber);
  evaluate->add_option("--resolution", ev.resolution, "Grid resolution in m (auto grids)")
      ->capture_default_str()->check(CLI::PositiveNumber);
  evaluate->add_option("--out", ev.out, "Write risk.csv (and images with --render) here");
  evaluate->add_option("--save-paths", ev.save_paths, "Also write the evaluated paths");
  evaluate->add_flag("--timings", ev.timings, "Fill the eval_ms column");
  evaluate->add_flag("--render", ev.render, "Write g.ppm, dg.ppm, paths.ppm to --out");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Time the bound against the exact baseline");
  bench_cmd->add_option("--k-list", bench.opt.k_list, "Obstacle counts")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--n-list", bench.opt.n_list, "Path counts")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--repeats", bench.opt.repeats, "Repeats (median)")->capture_default_str();
  bench_cmd->add_option("--seed", bench.opt.seed, "Seed of the first scene")->capture_default_str();
  bench_cmd->add_option("--scenes", bench.opt.scenes, "Independent scenes to pool")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--sigma-cells", bench.opt.sigma_cells)->capture_default_str();
  bench_cmd->add_option("--resolution", bench.opt.resolution)->capture_default_str();
  bench_cmd->add_option("--std", bench.opt.std_dev, "Obstacle position std in m")->capture_default_str();
  bench_cmd->add_flag("--no-exact", bench.no_exact, "Skip the exact baseline");
  bench_cmd->add_option("--out", bench.out, "Write the CSV here");

  RenderArgs rd;
  CLI::App* render = app.add_subcommand("render", "Write G, dG and path-risk images");
  render->add_option("scenario", rd.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  render->add_option("--paths", rd.paths, "Path JSON file")->check(CLI::ExistingFile);
  render->add_option("--risk", rd.risk, "Risk CSV from evaluate")->check(CLI::ExistingFile);
  render->add_option("--out", rd.out, "Output directory")->required();
  render->add_option("--sigma-cells", rd.sigma_cells)->capture_default_str()->check(CLI::PositiveNumber);
  render->add_option("--resolution", rd.resolution)->capture_default_str()->check(CLI::PositiveNumber);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-scenario", "Write a synthetic scenario");
  gen_cmd->add_option("--template", gen.tmpl, "carpark or random")
      ->check(CLI::IsMember({"carpark", "random"}))->capture_default_str();
  gen_cmd->add_option("--k", gen.k, "Obstacle count")->capture_default_str()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--std", gen.std_dev, "Position std in m (0.3 carpark, 0.7 random)");
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (evaluate->parsed()) {
      if (ev.paths.empty() && ev.gen == 0) {
        std::cerr << "error: evaluate needs --paths FILE or --gen N\n";
        return 1;
      }
      if (ev.render && ev.out.empty()) {
        std::cerr << "error: --render needs --out DIR\n";
        return 1;
      }
      return run_evaluate(ev);
    }
    if (bench_cmd->parsed()) return run_bench(bench);
    if (render->parsed()) return run_render(rd);
    if (gen_cmd->parsed()) return run_gen_scenario(gen);
  } catch (const fpr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
