#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fpr/geometry.hpp"
#include "fpr/path.hpp"
#include "fpr/rng.hpp"

namespace fpr::test {

inline GridSpec square_grid(double half, double res, Vec2 center = {}) {
  const int n = static_cast<int>(std::ceil(2.0 * half / res)) + 1;
  return GridSpec::make({center.x - 0.5 * (n - 1) * res, center.y - 0.5 * (n - 1) * res}, res,
                        n, n);
}

// Star-shaped polygon with radii in [rmin, rmax]; simple by construction.
inline Polygon random_star(std::mt19937_64& eng, int n, double rmin, double rmax) {
  std::vector<Vec2> v;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * (k + uniform(eng, 0.1, 0.9)) / n;
    const double r = uniform(eng, rmin, rmax);
    v.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return Polygon::make(v);
}

inline Polygon random_convex(std::mt19937_64& eng, int n, double rmin, double rmax) {
  std::vector<Vec2> pts;
  for (int k = 0; k < n; ++k) {
    const double a = uniform(eng, 0.0, 2.0 * std::numbers::pi);
    const double r = uniform(eng, rmin, rmax);
    pts.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return convex_hull(pts);
}

inline Path straight_path(Vec2 a, Vec2 b, double step) {
  Path p{"s", {}};
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  const double th = std::atan2(b.y - a.y, b.x - a.x);
  for (int k = 0; k <= n; ++k) {
    const double u = static_cast<double>(k) / n;
    p.poses.push_back({static_cast<double>(k), Pose2(a.x + u * (b.x - a.x), a.y + u * (b.y - a.y), th)});
  }
  return p;
}

inline Path arc_path(Vec2 c, double radius, double a0, double a1, int n) {
  Path p{"arc", {}};
  for (int k = 0; k <= n; ++k) {
    const double a = a0 + (a1 - a0) * k / n;
    p.poses.push_back({static_cast<double>(k),
                       Pose2(c.x + radius * std::cos(a), c.y + radius * std::sin(a),
                             a + 0.5 * std::numbers::pi)});
  }
  return p;
}

inline double cells_area(const ScalarField& f) { return f.sum() * f.spec().cell_area(); }

}  // namespace fpr::test
