#include "fpr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "fpr/error.hpp"
#include "fpr/rng.hpp"

namespace fpr {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::kParse, "scenario: " + where + ": " + what);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

Vec2 vec2(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected [x, y]");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

Pose2 pose(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) fail(where, "expected [x, y, theta]");
  return Pose2(number(j[0], where + "[0]"), number(j[1], where + "[1]"),
               number(j[2], where + "[2]"));
}

Polygon polygon(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of [x, y] vertices");
  std::vector<Vec2> v;
  for (std::size_t k = 0; k < j.size(); ++k) {
    v.push_back(vec2(j[k], where + "[" + std::to_string(k) + "]"));
  }
  try {
    return Polygon::make(std::move(v));
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing \"") + key + "\"");
  return obj.at(key);
}

ordered_json dump_vertices(const Polygon& p) {
  ordered_json a = ordered_json::array();
  for (Vec2 v : p.vertices()) a.push_back({v.x, v.y});
  return a;
}

Obstacle car(const std::string& id, Vec2 mean, double heading, double std_dev) {
  const double c = std::cos(heading), s = std::sin(heading);
  const Polygon body = Polygon::rectangle(2.0, 4.0);
  std::vector<Vec2> v;
  for (Vec2 p : body.vertices()) {
    v.push_back({c * p.x - s * p.y, s * p.x + c * p.y});
  }
  const double var = std_dev * std_dev;
  return {id, Polygon::make(std::move(v)), 0.0,
          LocationDensity::gaussian(mean, {var, 0.0, var})};
}

std::string obstacle_id(int n) {
  std::string s = std::to_string(n);
  return "car" + std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

Scenario carpark(int k, double std_dev, std::uint64_t seed) {
  constexpr int kBays = 12;
  constexpr double kBayWidth = 2.6, kCarLength = 4.0, kAisle = 6.0;
  constexpr double kRowPitch = kCarLength + kAisle;
  const int rows = std::max(2, (k + 8) / 9);
  const int middle = rows / 2;
  std::mt19937_64 eng(splitmix64(seed));

  std::vector<int> slots(static_cast<std::size_t>(rows * kBays));
  for (int n = 0; n < rows * kBays; ++n) slots[n] = n;
  for (int n = rows * kBays - 1; n > 0; --n) {
    const int m = static_cast<int>(std::floor(uniform(eng, 0.0, n + 1.0)));
    std::swap(slots[n], slots[std::min(m, n)]);
  }
  std::vector<int> chosen(slots.begin(), slots.begin() + k);
  std::sort(chosen.begin(), chosen.end());

  Scenario sc;
  sc.seed = seed;
  int n = 0;
  for (int s : chosen) {
    const Vec2 mean{(s % kBays) * kBayWidth, (s / kBays) * kRowPitch};
    sc.obstacles.push_back(car(obstacle_id(n++), mean, 0.0, std_dev));
  }
  const double aisle = middle * kRowPitch - 0.5 * kRowPitch;
  sc.start = Pose2(-6.0, aisle, 0.0);
  sc.goal = Pose2((kBays - 1) * kBayWidth + 6.0, aisle, 0.0);
  return sc;
}

Scenario random_scene(int k, double std_dev, std::uint64_t seed) {
  constexpr int kMaxAttempts = 1000;
  const double side = std::max(24.0, std::sqrt(60.0 * k));
  std::mt19937_64 eng(splitmix64(seed));
  Scenario sc;
  sc.seed = seed;
  sc.start = Pose2(-0.5 * side - 4.0, uniform(eng, -0.25 * side, 0.25 * side), 0.0);
  sc.goal = Pose2(0.5 * side + 4.0, uniform(eng, -0.25 * side, 0.25 * side), 0.0);
  const Polygon start_box = posed(Polygon::rectangle(8.0, 6.0), sc.start);
  const Polygon goal_box = posed(Polygon::rectangle(8.0, 6.0), sc.goal);
  std::vector<Polygon> placed;
  int rejected = 0;
  while (static_cast<int>(sc.obstacles.size()) < k) {
    if (rejected >= kMaxAttempts) {
      throw Error(ErrorKind::kPlacementFailed,
                  "could not place " + std::to_string(k) + " obstacles without overlap");
    }
    const Vec2 mean{uniform(eng, -0.5 * side, 0.5 * side), uniform(eng, -0.5 * side, 0.5 * side)};
    const double heading = uniform(eng, -std::numbers::pi, std::numbers::pi);
    Obstacle o = car(obstacle_id(static_cast<int>(sc.obstacles.size())), mean, heading, std_dev);
    const Polygon world = posed(inflate(o.shape, 0.5), Pose2(mean.x, mean.y, 0.0));
    const bool clash =
        convex_intersect(world, start_box) || convex_intersect(world, goal_box) ||
        std::any_of(placed.begin(), placed.end(),
                    [&](const Polygon& p) { return convex_intersect(world, p); });
    if (clash) {
      ++rejected;
      continue;
    }
    placed.push_back(world);
    sc.obstacles.push_back(std::move(o));
  }
  return sc;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("scenario: ") + e.what());
  }
  if (!doc.is_object()) fail("root", "expected an object");
  Scenario s;

  const json& g = field(doc, "grid", "root");
  if (g.is_string()) {
    if (g.get<std::string>() != "auto") fail("grid", "expected \"auto\" or an object");
  } else if (g.is_object()) {
    const double res = number(field(g, "resolution", "grid"), "grid.resolution");
    if (!(res > 0.0)) fail("grid.resolution", "must be positive");
    s.resolution = res;
    const bool has_extent = g.contains("origin") || g.contains("width") || g.contains("height");
    if (has_extent) {
      const Vec2 origin = vec2(field(g, "origin", "grid"), "grid.origin");
      const json& w = field(g, "width", "grid");
      const json& h = field(g, "height", "grid");
      if (!w.is_number_integer() || !h.is_number_integer()) {
        fail("grid", "width and height must be integers");
      }
      try {
        s.grid = GridSpec::make(origin, res, w.get<int>(), h.get<int>());
      } catch (const Error& e) {
        fail("grid", e.what());
      }
    }
  } else {
    fail("grid", "expected \"auto\" or an object");
  }

  s.robot = polygon(field(field(doc, "robot", "root"), "vertices", "robot"), "robot.vertices");

  const json& obs = field(doc, "obstacles", "root");
  if (!obs.is_array()) fail("obstacles", "expected an array");
  for (std::size_t k = 0; k < obs.size(); ++k) {
    const std::string where = "obstacles[" + std::to_string(k) + "]";
    const json& o = obs[k];
    const json& id = field(o, "id", where);
    if (!id.is_string()) fail(where + ".id", "expected a string");
    Obstacle ob;
    ob.id = id.get<std::string>();
    ob.shape = polygon(field(o, "vertices", where), where + ".vertices");
    const Vec2 mean = vec2(field(o, "mean", where), where + ".mean");
    const json& c = field(o, "cov", where);
    if (!c.is_array() || c.size() != 2) fail(where + ".cov", "expected a 2x2 matrix");
    const Vec2 r0 = vec2(c[0], where + ".cov[0]");
    const Vec2 r1 = vec2(c[1], where + ".cov[1]");
    if (std::abs(r0.y - r1.x) > 1e-12 * std::max(1.0, std::abs(r0.y))) {
      fail(where + ".cov", "matrix is not symmetric");
    }
    try {
      ob.density = LocationDensity::gaussian(mean, {r0.x, r0.y, r1.y});
    } catch (const Error& e) {
      fail(where + ".cov", e.what());
    }
    if (o.contains("inflation")) {
      ob.inflation = number(o["inflation"], where + ".inflation");
      if (ob.inflation < 0.0) fail(where + ".inflation", "must be non-negative");
      if (ob.inflation > 0.0 && !ob.shape.is_convex()) {
        fail(where + ".inflation", "inflation requires a convex shape");
      }
    }
    s.obstacles.push_back(std::move(ob));
  }

  s.start = pose(field(doc, "start", "root"), "start");
  s.goal = pose(field(doc, "goal", "root"), "goal");
  const json& seed = field(doc, "seed", "root");
  if (!seed.is_number_integer() ||
      (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
    fail("seed", "expected a non-negative integer");
  }
  s.seed = seed.get<std::uint64_t>();
  return s;
}

Scenario load_scenario(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidInput, "cannot open scenario '" + file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string dump_scenario(const Scenario& s) {
  ordered_json doc;
  if (s.grid) {
    doc["grid"] = {{"resolution", s.grid->resolution},
                   {"origin", {s.grid->origin.x, s.grid->origin.y}},
                   {"width", s.grid->width},
                   {"height", s.grid->height}};
  } else if (s.resolution) {
    doc["grid"] = {{"resolution", *s.resolution}};
  } else {
    doc["grid"] = "auto";
  }
  doc["robot"] = {{"vertices", dump_vertices(s.robot)}};
  doc["obstacles"] = ordered_json::array();
  for (const Obstacle& o : s.obstacles) {
    const Mat2& c = o.density.cov();
    ordered_json jo;
    jo["id"] = o.id;
    jo["vertices"] = dump_vertices(o.shape);
    jo["mean"] = {o.density.mean().x, o.density.mean().y};
    jo["cov"] = {{c.xx, c.xy}, {c.xy, c.yy}};
    jo["inflation"] = o.inflation;
    doc["obstacles"].push_back(std::move(jo));
  }
  doc["start"] = {s.start.x, s.start.y, s.start.theta};
  doc["goal"] = {s.goal.x, s.goal.y, s.goal.theta};
  doc["seed"] = s.seed;
  return doc.dump(2) + "\n";
}

GridSpec auto_grid(const Scenario& s, std::span<const Path> paths, double resolution,
                   double sigma_cells) {
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  auto cover = [&](Vec2 p, double r) {
    xmin = std::min(xmin, p.x - r);
    xmax = std::max(xmax, p.x + r);
    ymin = std::min(ymin, p.y - r);
    ymax = std::max(ymax, p.y + r);
  };
  double max_std = 0.0;
  for (const Obstacle& o : s.obstacles) {
    const Vec2 m = o.density.mean();
    const Polygon shape = o.effective_shape();
    for (Vec2 v : shape.vertices()) cover(m + v, 0.0);
    max_std = std::max(max_std, o.density.max_std());
  }
  const double reach = s.robot.bounding_radius();
  cover({s.start.x, s.start.y}, reach);
  cover({s.goal.x, s.goal.y}, reach);
  for (const Path& p : paths) {
    for (const TimedPose& q : p.poses) cover({q.pose.x, q.pose.y}, reach);
  }
  const double pad = 4.0 * sigma_cells * resolution + 3.0 * max_std;
  const int i0 = static_cast<int>(std::floor((xmin - pad) / resolution));
  const int j0 = static_cast<int>(std::floor((ymin - pad) / resolution));
  const int i1 = static_cast<int>(std::ceil((xmax + pad) / resolution));
  const int j1 = static_cast<int>(std::ceil((ymax + pad) / resolution));
  return GridSpec::make({i0 * resolution, j0 * resolution}, resolution, i1 - i0 + 1,
                        j1 - j0 + 1);
}

GridSpec resolve_grid(const Scenario& s, std::span<const Path> paths, double resolution,
                      double sigma_cells) {
  if (s.grid) return *s.grid;
  return auto_grid(s, paths, resolution, sigma_cells);
}

Scenario generate_scenario(ScenarioTemplate tmpl, int k, double std_dev, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorKind::kInvalidInput, "obstacle count must be at least 1");
  if (!(std_dev >= 0.0) || !std::isfinite(std_dev)) {
    throw Error(ErrorKind::kInvalidInput, "std must be finite and non-negative");
  }
  return tmpl == ScenarioTemplate::kCarpark ? carpark(k, std_dev, seed)
                                            : random_scene(k, std_dev, seed);
}

}  // namespace fpr
