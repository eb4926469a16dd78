#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace fpr {

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double theta) {
  double a = std::remainder(theta, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

/// Planar pose in SE(2). Heading is kept normalized to (-pi, pi].
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2() = default;
  Pose2(double x_, double y_, double theta_)
      : x(x_), y(y_), theta(normalize_angle(theta_)) {}

  friend bool operator==(const Pose2&, const Pose2&) = default;
};

struct TimedPose {
  double t = 0.0;
  Pose2 pose;

  friend bool operator==(const TimedPose&, const TimedPose&) = default;
};

/// A candidate path: timed pose sequence. Timestamps are carried for file
/// compatibility only; risk is computed over the swept xy set.
struct Path {
  std::string id;
  std::vector<TimedPose> poses;

  friend bool operator==(const Path&, const Path&) = default;
};

}  // namespace fpr
