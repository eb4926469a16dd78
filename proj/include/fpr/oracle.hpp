#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fpr/geometry.hpp"
#include "fpr/risk.hpp"

namespace fpr {

struct McEstimate {
  double p_hat = 0.0;
  /// Binomial standard error sqrt(p (1 - p) / n).
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// World-frame convex footprint pieces at every pose.
std::vector<Polygon> posed_footprints(std::span<const Pose2> poses, const Polygon& footprint);

/// Fraction of n sampled obstacle locations at which the (convex) obstacle
/// meets any of `swept_polys`, which must be convex.
///
/// Locations for obstacle k in chunk c of 4096 samples come from an
/// mt19937_64 seeded by splitmix64 of (seed, k, c); Gaussian draws use
/// Box-Muller and the Cholesky factor; gridded densities draw cell centers.
McEstimate mc_single(std::span<const Polygon> swept_polys, const Obstacle& obs,
                     std::size_t n, std::uint64_t seed);
/// Joint estimate: per sample every obstacle is placed independently and a
/// collision with any of them counts once.
McEstimate mc_total(std::span<const Polygon> swept_polys, std::span<const Obstacle> obstacles,
                    std::size_t n, std::uint64_t seed);

}  // namespace fpr
