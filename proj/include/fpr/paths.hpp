#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fpr/geometry.hpp"
#include "fpr/path.hpp"
#include "fpr/risk.hpp"

namespace fpr {

/// Sampler constants. None of these come from a measured vehicle.
struct Kinematics {
  double max_curvature = 0.2;     // 1/m
  double step = 0.5;              // m of arc length per pose
  double max_heading_step = 0.3;  // rad between consecutive poses
  int steering_levels = 9;        // quantized curvature values in [-k, k]
  double speed = 2.0;             // m/s, only used for timestamps
};

/// Up to n curvature-bounded paths from start toward goal.
///
/// Each attempt picks 1 to 3 random waypoints in a corridor around the
/// start-goal segment and drives through them with a quantized pure-pursuit
/// arc controller. Per stage four jittered targets are rolled out and the
/// one ending closest to the goal without grossly hitting a mean-placed
/// obstacle is kept. Attempts that still collide are retried; after the
/// retry budget the best colliding attempt is emitted anyway. The first
/// attempt of path 0 drives straight at the goal.
std::vector<Path> generate_paths(const Pose2& start, const Pose2& goal, std::size_t n,
                                 const Kinematics& kin, std::uint64_t seed,
                                 std::span<const Obstacle> obstacles, const Polygon& robot);

/// Curvature of the arc joining two consecutive poses.
double segment_curvature(const Pose2& a, const Pose2& b);

/// Throws kInvalidInput naming the path when timestamps are not strictly
/// increasing or a heading step exceeds `max_heading_step`.
void validate_path(const Path& path, double max_heading_step = 0.3);

/// {"paths":[{"id":..., "poses":[[t, x, y, theta], ...]}, ...]}
std::vector<Path> parse_paths(const std::string& text, double max_heading_step = 0.3);
std::vector<Path> load_paths(const std::string& file, double max_heading_step = 0.3);
std::string dump_paths(std::span<const Path> paths);

}  // namespace fpr
