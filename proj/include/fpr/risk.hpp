#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fpr/fields.hpp"
#include "fpr/geometry.hpp"

namespace fpr {

/// Obstacle of known shape whose reference point is distributed by
/// `density`. The shape is in the body frame with its mean heading applied.
struct Obstacle {
  std::string id;
  Polygon shape = Polygon::rectangle(1.0, 1.0);
  /// Optional outward expansion of the shape in meters.
  double inflation = 0.0;
  LocationDensity density = LocationDensity::gaussian({}, {});

  Polygon effective_shape() const { return inflate(shape, inflation); }
};

/// The two obstacle-independent fields shared by all paths:
///   g        = sum_k lambda_k (I_Bk * p_k)
///   dg_sigma = 1/2 sum_k (ridge(I_Bk) * p_k)
struct RiskFields {
  ScalarField g;
  ScalarField dg_sigma;
  double sigma_cells = 2.0;
  std::size_t k_count = 0;
  /// Largest fraction of any obstacle's mass cut off by the grid.
  double max_truncation = 0.0;
};

/// Builds both fields on `spec`. Each obstacle's shape is rasterized on a
/// lattice through its own body origin and carried to the world grid by
/// its density; contributions are added in obstacle order.
///
/// Throws kPointObstacle for shapes smaller than one cell.
RiskFields precompute_fields(std::span<const Obstacle> obstacles, const GridSpec& spec,
                             double sigma_cells);

/// True for shapes below one cell of area or covering no cell center; those
/// obstacles are handled by the point bound.
bool is_point_obstacle(const Polygon& shape, double resolution);

/// Per-obstacle normalization 1 / (cells covered by the shape * cell area).
double obstacle_lambda(const Polygon& shape, double resolution);

/// Upper bound on the expected number of collisions for the swept area:
///   integral(ridge(I_A) * dg_sigma) + integral(I_A * g).
/// `swept` may be any window on the same lattice as the fields. Not clamped.
double fpr_bound(const ScalarField& swept, const RiskFields& rf);

/// sum_k p_k as a density field on `spec`.
ScalarField point_field(std::span<const LocationDensity> points, const GridSpec& spec);
/// integral over A of sum_k p_k.
double point_bound(std::span<const LocationDensity> points, const ScalarField& swept);

/// Collision probability with one obstacle: the mass of p over the set of
/// locations r where B + r meets the swept area.
///
/// This overload builds that set from the continuous shapes (posed
/// footprint plus reflected obstacle, per resampled pose), tested at
/// samples_per_axis^2 sub-points per cell. Gaussian densities are evaluated
/// at the sub-points; gridded densities weight each cell's mass by the
/// fraction of its sub-points inside the set. samples_per_axis = 1 gives the
/// plain cell-center rule, which near-delta densities always use. Result
/// clamped to [0, 1].
double laugier_exact(const SweptArea& swept, const Obstacle& obs,
                     double* truncated_fraction = nullptr, int samples_per_axis = 8);
/// Same quantity from a rasterized swept area, dilated on the grid by the
/// reflected, rasterized obstacle, with the cell-center rule.
double laugier_exact(const ScalarField& swept, const Obstacle& obs);

struct ExactTotal {
  double p_d = 0.0;
  double p_d_bar = 0.0;
};

/// 1 - prod(1 - p_k) and sum p_k for independent obstacles.
ExactTotal exact_total(std::span<const double> per_obstacle);

}  // namespace fpr
