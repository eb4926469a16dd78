#include "fpr/paths.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fpr/error.hpp"
#include "fpr/rng.hpp"

namespace fpr {

namespace {

constexpr int kMaxAttempts = 50;
constexpr int kStageCandidates = 4;
constexpr double kWaypointTolerance = 1.5;  // m
constexpr double kJitter = 1.5;             // m
constexpr double kGrossScale = 0.8;

struct Bounded {
  Polygon poly;
  Vec2 lo;
  Vec2 hi;
};

Bounded with_bounds(Polygon p) {
  Bounded b{std::move(p), {}, {}};
  b.lo = b.hi = b.poly.vertices().front();
  for (Vec2 v : b.poly.vertices()) {
    b.lo = {std::min(b.lo.x, v.x), std::min(b.lo.y, v.y)};
    b.hi = {std::max(b.hi.x, v.x), std::max(b.hi.y, v.y)};
  }
  return b;
}

bool boxes_meet(const Bounded& a, const Bounded& b) {
  return !(a.hi.x < b.lo.x || b.hi.x < a.lo.x || a.hi.y < b.lo.y || b.hi.y < a.lo.y);
}

// Shrunken robot and mean-placed obstacles for the coarse collision check.
class GrossChecker {
 public:
  GrossChecker(std::span<const Obstacle> obstacles, const Polygon& robot) {
    for (const Polygon& piece : convex_pieces(scaled_about_centroid(robot, kGrossScale))) {
      robot_.push_back(piece);
    }
    for (const Obstacle& o : obstacles) {
      const Polygon mean_shape = posed(
          scaled_about_centroid(o.shape, kGrossScale),
          Pose2(o.density.mean().x, o.density.mean().y, 0.0));
      for (const Polygon& piece : convex_pieces(mean_shape)) {
        obstacles_.push_back(with_bounds(piece));
      }
    }
  }

  bool collides(const Pose2& pose) const {
    if (obstacles_.empty()) return false;
    for (const Polygon& piece : robot_) {
      const Bounded r = with_bounds(posed(piece, pose));
      for (const Bounded& o : obstacles_) {
        if (boxes_meet(r, o) && convex_intersect(r.poly, o.poly)) return true;
      }
    }
    return false;
  }

 private:
  std::vector<Polygon> robot_;
  std::vector<Bounded> obstacles_;
};

Pose2 advance(const Pose2& p, double curvature, double s) {
  if (std::abs(curvature) < 1e-12) {
    return Pose2(p.x + s * std::cos(p.theta), p.y + s * std::sin(p.theta), p.theta);
  }
  const double th = p.theta + curvature * s;
  return Pose2(p.x + (std::sin(th) - std::sin(p.theta)) / curvature,
               p.y - (std::cos(th) - std::cos(p.theta)) / curvature, th);
}

struct Stage {
  std::vector<Pose2> poses;
  bool reached = false;
  int collisions = 0;
};

// Quantized pure pursuit toward `target` until within `tolerance`.
Stage drive(Pose2 cur, Vec2 target, double tolerance, const Kinematics& kin,
            const GrossChecker& checker) {
  Stage st;
  const int levels = std::max(2, kin.steering_levels);
  const double spacing = 2.0 * kin.max_curvature / (levels - 1);
  const double d0 = std::hypot(target.x - cur.x, target.y - cur.y);
  const int max_steps = static_cast<int>(std::ceil(3.0 * d0 / kin.step)) + 200;
  for (int n = 0; n < max_steps; ++n) {
    const double dx = target.x - cur.x, dy = target.y - cur.y;
    const double d = std::hypot(dx, dy);
    if (d <= tolerance) {
      st.reached = true;
      return st;
    }
    const double alpha = normalize_angle(std::atan2(dy, dx) - cur.theta);
    const double want = 2.0 * std::sin(alpha) / d;
    double level = std::round((want + kin.max_curvature) / spacing);
    level = std::clamp(level, 0.0, static_cast<double>(levels - 1));
    double kappa = -kin.max_curvature + level * spacing;
    if (level == (levels - 1) / 2.0) kappa = 0.0;
    cur = advance(cur, kappa, kin.step);
    st.poses.push_back(cur);
    if (checker.collides(cur)) ++st.collisions;
  }
  return st;
}

double distance(const Pose2& p, Vec2 q) { return std::hypot(q.x - p.x, q.y - p.y); }

struct Attempt {
  std::vector<Pose2> poses;
  bool reached = false;
  int collisions = 0;
};

Attempt roll_out(const Pose2& start, const Pose2& goal, const std::vector<Vec2>& waypoints,
                 const Kinematics& kin, const GrossChecker& checker, std::mt19937_64& eng) {
  Attempt a;
  a.poses.push_back(start);
  const Vec2 g{goal.x, goal.y};
  for (Vec2 w : waypoints) {
    Stage best;
    double best_score = std::numeric_limits<double>::infinity();
    for (int c = 0; c < kStageCandidates; ++c) {
      Vec2 t = w;
      if (c > 0) t = t + Vec2{uniform(eng, -kJitter, kJitter), uniform(eng, -kJitter, kJitter)};
      Stage st = drive(a.poses.back(), t, kWaypointTolerance, kin, checker);
      if (!st.reached) continue;
      const Pose2& end = st.poses.empty() ? a.poses.back() : st.poses.back();
      // Collisions dominate, then proximity of the stage end to the goal.
      const double score = st.collisions * 1e6 + distance(end, g);
      if (score < best_score) {
        best_score = score;
        best = std::move(st);
      }
    }
    if (!best.reached) return a;
    a.collisions += best.collisions;
    a.poses.insert(a.poses.end(), best.poses.begin(), best.poses.end());
  }
  Stage last = drive(a.poses.back(), g, kin.step, kin, checker);
  a.collisions += last.collisions;
  a.poses.insert(a.poses.end(), last.poses.begin(), last.poses.end());
  a.reached = last.reached && a.poses.size() >= 2;
  return a;
}

std::string path_id(std::size_t n) {
  std::string s = std::to_string(n);
  return "p" + std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

}  // namespace

std::vector<Path> generate_paths(const Pose2& start, const Pose2& goal, std::size_t n,
                                 const Kinematics& kin, std::uint64_t seed,
                                 std::span<const Obstacle> obstacles, const Polygon& robot) {
  if (n == 0) throw Error(ErrorKind::kInvalidInput, "path count must be at least 1");
  const double span = std::hypot(goal.x - start.x, goal.y - start.y);
  if (span <= kin.step) {
    throw Error(ErrorKind::kInvalidInput, "start and goal must be more than one step apart");
  }
  if (!(kin.max_curvature > 0.0) || !(kin.step > 0.0) ||
      kin.max_curvature * kin.step > kin.max_heading_step) {
    throw Error(ErrorKind::kInvalidInput, "kinematic limits are inconsistent");
  }
  const GrossChecker checker(obstacles, robot);
  std::mt19937_64 eng(splitmix64(seed));
  const Vec2 axis{(goal.x - start.x) / span, (goal.y - start.y) / span};
  const Vec2 side{-axis.y, axis.x};
  const double lateral = std::max(2.0, 0.15 * span);

  std::vector<Path> out;
  for (std::size_t p = 0; p < n; ++p) {
    Attempt fallback;
    bool have_fallback = false, accepted = false;
    for (int attempt = 0; attempt < kMaxAttempts && !accepted; ++attempt) {
      std::vector<Vec2> waypoints;
      const int count = (p == 0 && attempt == 0)
                            ? 0
                            : static_cast<int>(std::min(3.0, std::floor(uniform(eng, 1.0, 4.0))));
      std::vector<double> along;
      for (int w = 0; w < count; ++w) along.push_back(uniform(eng, 0.15, 0.85));
      std::sort(along.begin(), along.end());
      for (double u : along) {
        const double off = uniform(eng, -lateral, lateral);
        waypoints.push_back(Vec2{start.x, start.y} + (u * span) * axis + off * side);
      }
      Attempt a = roll_out(start, goal, waypoints, kin, checker, eng);
      if (!a.reached) continue;
      if (a.collisions == 0) {
        fallback = std::move(a);
        have_fallback = accepted = true;
      } else if (!have_fallback || a.collisions < fallback.collisions) {
        fallback = std::move(a);
        have_fallback = true;
      }
    }
    if (!have_fallback) continue;
    Path path{path_id(out.size()), {}};
    for (std::size_t k = 0; k < fallback.poses.size(); ++k) {
      path.poses.push_back({k * kin.step / kin.speed, fallback.poses[k]});
    }
    out.push_back(std::move(path));
  }
  if (out.empty()) {
    throw Error(ErrorKind::kGenerationFailed, "no path reached the goal within the retry budget");
  }
  return out;
}

double segment_curvature(const Pose2& a, const Pose2& b) {
  const double chord = std::hypot(b.x - a.x, b.y - a.y);
  const double dth = normalize_angle(b.theta - a.theta);
  if (chord == 0.0) return dth == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return 2.0 * std::sin(0.5 * std::abs(dth)) / chord;
}

void validate_path(const Path& path, double max_heading_step) {
  for (std::size_t k = 1; k < path.poses.size(); ++k) {
    const TimedPose& a = path.poses[k - 1];
    const TimedPose& b = path.poses[k];
    if (!(b.t > a.t)) {
      throw Error(ErrorKind::kInvalidInput, "path '" + path.id +
                                                "': timestamps not strictly increasing at pose " +
                                                std::to_string(k));
    }
    if (std::abs(normalize_angle(b.pose.theta - a.pose.theta)) > max_heading_step + 1e-12) {
      throw Error(ErrorKind::kInvalidInput, "path '" + path.id +
                                                "': heading step too large at pose " +
                                                std::to_string(k));
    }
  }
}

std::vector<Path> parse_paths(const std::string& text, double max_heading_step) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("path file: ") + e.what());
  }
  auto fail = [](const std::string& where, const std::string& what) {
    throw Error(ErrorKind::kParse, "path file: " + where + ": " + what);
  };
  if (!doc.is_object() || !doc.contains("paths") || !doc["paths"].is_array()) {
    fail("root", "expected an object with a \"paths\" array");
  }
  std::vector<Path> out;
  for (std::size_t n = 0; n < doc["paths"].size(); ++n) {
    const json& jp = doc["paths"][n];
    const std::string where = "paths[" + std::to_string(n) + "]";
    if (!jp.is_object() || !jp.contains("id") || !jp["id"].is_string()) {
      fail(where, "missing string field \"id\"");
    }
    Path p{jp["id"].get<std::string>(), {}};
    if (!jp.contains("poses") || !jp["poses"].is_array()) {
      fail(where + " ('" + p.id + "')", "missing array field \"poses\"");
    }
    for (std::size_t k = 0; k < jp["poses"].size(); ++k) {
      const json& q = jp["poses"][k];
      if (!q.is_array() || q.size() != 4 ||
          !std::all_of(q.begin(), q.end(), [](const json& v) { return v.is_number(); })) {
        fail(where + ".poses[" + std::to_string(k) + "] ('" + p.id + "')",
             "expected [t, x, y, theta]");
      }
      const double t = q[0].get<double>(), x = q[1].get<double>();
      const double y = q[2].get<double>(), th = q[3].get<double>();
      if (!std::isfinite(t) || !std::isfinite(x) || !std::isfinite(y) || !std::isfinite(th)) {
        fail(where + ".poses[" + std::to_string(k) + "] ('" + p.id + "')", "non-finite value");
      }
      p.poses.push_back({t, Pose2(x, y, th)});
    }
    validate_path(p, max_heading_step);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Path> load_paths(const std::string& file, double max_heading_step) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidInput, "cannot open path file '" + file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_paths(ss.str(), max_heading_step);
}

std::string dump_paths(std::span<const Path> paths) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["paths"] = ordered_json::array();
  for (const Path& p : paths) {
    ordered_json jp;
    jp["id"] = p.id;
    jp["poses"] = ordered_json::array();
    for (const TimedPose& q : p.poses) {
      jp["poses"].push_back({q.t, q.pose.x, q.pose.y, q.pose.theta});
    }
    doc["paths"].push_back(std::move(jp));
  }
  return doc.dump() + "\n";
}

}  // namespace fpr
