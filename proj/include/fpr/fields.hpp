#pragma once

#include <vector>

#include "fpr/geometry.hpp"

namespace fpr {

/// Odd-length 1D kernel, indexed taps[k + radius] for offsets k in
/// [-radius, radius].
struct Kernel1D {
  std::vector<double> taps;
  double sigma_cells = 0.0;

  int radius() const { return static_cast<int>(taps.size() / 2); }
  double operator[](int k) const { return taps[k + radius()]; }
};

/// Sampled Gaussian truncated at ceil(4 sigma) and normalized to unit sum.
Kernel1D gaussian_kernel(double sigma_cells);
/// Sampled Gaussian derivative g'(k), normalized so that -sum(k * d(k)) = 1.
/// A unit step therefore produces a response that sums to one.
Kernel1D gaussian_derivative_kernel(double sigma_cells);

/// out(i, j) = sum_k kx[k] f(i - k, j), then the same along y with ky.
/// Zero padding; output spec equals the input spec.
ScalarField convolve_separable(const ScalarField& f, const Kernel1D& kx,
                               const Kernel1D& ky);
ScalarField convolve_separable(const ScalarField& f, const Kernel1D& k);

/// Gradient-of-Gaussian magnitude |grad(g_sigma * I)| in 1/m, so that its
/// integral approximates the perimeter of the indicated set. Samples past
/// the grid border repeat the border, so the border itself is not an edge.
///
/// Runs along rows and columns are turned into derivative responses near
/// their end points only, so the cost scales with the boundary length.
ScalarField ridge(const ScalarField& ind, double sigma_cells);

struct Mat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Probability density of an obstacle reference point.
class LocationDensity {
 public:
  enum class Kind { kGaussian, kGridded };

  /// Covariance must be symmetric positive-definite, or exactly zero for a
  /// point mass at the mean.
  static LocationDensity gaussian(Vec2 mean, Mat2 cov);
  /// Density values in 1/m^2; must be non-negative and integrate to one.
  static LocationDensity gridded(ScalarField density);

  Kind kind() const { return kind_; }
  Vec2 mean() const { return mean_; }
  const Mat2& cov() const { return cov_; }
  const ScalarField& grid() const { return grid_; }
  /// Square root of the largest covariance eigenvalue (gaussian), or the
  /// largest marginal std of the gridded mass.
  double max_std() const;
  /// Same density translated by d.
  LocationDensity shifted(Vec2 d) const;

 private:
  Kind kind_ = Kind::kGaussian;
  Vec2 mean_;
  Mat2 cov_;
  ScalarField grid_;
};

/// Cell probability masses of `p` sampled at lattice points base + (a, b) h.
/// The returned field's cell (i, j) holds the mass at offset index
/// (box.x0 + i, box.y0 + j); the masses sum to one. Gaussians are truncated
/// at 5 std; a std below a quarter cell collapses to the nearest point.
struct DensityMasses {
  ScalarField masses;
  CellBox box;
  /// Separable factors, filled when the covariance is diagonal.
  std::vector<double> mx;
  std::vector<double> my;
};
DensityMasses density_masses(const LocationDensity& p, Vec2 base, double resolution);

struct Convolved {
  ScalarField field;
  /// Fraction of the input mass that fell outside the output grid.
  double truncated_fraction = 0.0;

  bool truncation_warning() const { return truncated_fraction > 1e-3; }
};

/// (f * p)(x) = sum_r f(x - r) P(r) evaluated on `out_spec`, which must share
/// f's resolution. Diagonal Gaussians use two 1D passes, other densities a
/// direct sum over the nonzero samples of f.
Convolved convolve_density_into(const ScalarField& f, const LocationDensity& p,
                                const GridSpec& out_spec);
/// convolve_density_into on f's own spec.
Convolved convolve_density(const ScalarField& f, const LocationDensity& p);

/// Riemann sum of samples times cell area.
double integrate(const ScalarField& f);
/// Riemann sum of a * b over the overlap of two same-lattice fields. Only
/// cells where a is nonzero are visited.
double integrate_product(const ScalarField& a, const ScalarField& b);

/// Integral of the product of the ridges of two half-planes whose edges
/// cross at angle theta, restricted to a disc around the crossing large
/// enough to hold the overlap. Exact value: 1 / sin(theta).
double ridge_crossing_integral(double theta, double sigma_cells);

}  // namespace fpr
