#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fpr/error.hpp"
#include "fpr/fields.hpp"
#include "support.hpp"

using namespace fpr;

namespace {

ScalarField random_field(std::mt19937_64& eng, const GridSpec& g, double density = 1.0) {
  ScalarField f(g);
  for (double& v : f.samples()) v = uniform(eng, 0.0, 1.0) < density ? uniform(eng, -1, 1) : 0.0;
  return f;
}

// out(i, j) = sum_{a, b} kx[a] ky[b] f(i - a, j - b), zero outside.
ScalarField direct_2d(const ScalarField& f, const Kernel1D& kx, const Kernel1D& ky) {
  ScalarField out(f.spec());
  const int rx = kx.radius(), ry = ky.radius();
  for (int j = 0; j < f.height(); ++j) {
    for (int i = 0; i < f.width(); ++i) {
      double s = 0.0;
      for (int b = -ry; b <= ry; ++b) {
        for (int a = -rx; a <= rx; ++a) {
          const int u = i - a, v = j - b;
          if (u >= 0 && v >= 0 && u < f.width() && v < f.height()) s += kx[a] * ky[b] * f.at(u, v);
        }
      }
      out.at(i, j) = s;
    }
  }
  return out;
}

double sup_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.samples().size(); ++n) {
    m = std::max(m, std::abs(a.samples()[n] - b.samples()[n]));
  }
  return m;
}

// Independent Gaussian pdf sampled at lattice points, cut at 5 std per axis
// and normalized, as a gridded density.
LocationDensity sampled_gaussian(Vec2 mean, double sx, double sy, const GridSpec& lattice) {
  const double h = lattice.resolution;
  ScalarField d(lattice);
  double s = 0.0;
  for (int j = 0; j < d.height(); ++j) {
    for (int i = 0; i < d.width(); ++i) {
      const Vec2 c = lattice.center(i, j);
      const double zx = (c.x - mean.x) / sx, zy = (c.y - mean.y) / sy;
      const double v = std::abs(zx) <= 5.0 && std::abs(zy) <= 5.0
                           ? std::exp(-0.5 * (zx * zx + zy * zy)) : 0.0;
      d.at(i, j) = v;
      s += v;
    }
  }
  for (double& v : d.samples()) v /= s * h * h;
  return LocationDensity::gridded(d);
}

}  // namespace

TEST_CASE("gaussian kernel is normalized, symmetric, 4-sigma wide") {
  for (double s : {0.3, 0.7, 1.0, 2.0, 3.5}) {
    const Kernel1D k = gaussian_kernel(s);
    double sum = 0.0;
    for (double t : k.taps) sum += t;
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    CHECK(k.radius() == static_cast<int>(std::ceil(4.0 * s)));
    for (int m = 1; m <= k.radius(); ++m) CHECK(k[m] == k[-m]);
  }
  CHECK(gaussian_kernel(2.0).radius() == 8);
  CHECK_THROWS_AS(gaussian_kernel(0.0), Error);
  CHECK_THROWS_AS(gaussian_kernel(-1.0), Error);
}

TEST_CASE("derivative kernel has unit first moment") {
  const Kernel1D d = gaussian_derivative_kernel(2.0);
  double m = 0.0, s = 0.0;
  for (int k = -d.radius(); k <= d.radius(); ++k) {
    m += -k * d[k];
    s += d[k];
  }
  CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(s) <= 1e-12);
}

TEST_CASE("convolving a constant leaves the interior unchanged") {
  const GridSpec g = GridSpec::make({0, 0}, 0.05, 40, 40);
  const ScalarField c(g, 3.0);
  const ScalarField out = convolve_separable(c, gaussian_kernel(2.0));
  for (int j = 8; j < 32; ++j) {
    for (int i = 8; i < 32; ++i) CHECK(std::abs(out.at(i, j) - 3.0) <= 1e-9);
  }
}

TEST_CASE("delta convolves to a unit-mass Gaussian") {
  const GridSpec g = GridSpec::make({0, 0}, 0.05, 41, 41);
  ScalarField d(g);
  d.at(20, 20) = 1.0 / g.cell_area();
  const ScalarField out = convolve_separable(d, gaussian_kernel(2.0));
  CHECK(std::abs(integrate(out) - 1.0) <= 1e-6);
  CHECK(out.at(20, 20) == out.max());
}

TEST_CASE("separable convolution equals direct 2D convolution") {
  std::mt19937_64 eng(1);
  const GridSpec g = GridSpec::make({0, 0}, 0.05, 32, 32);
  for (double s : {0.8, 2.0, 3.0}) {
    const ScalarField f = random_field(eng, g);
    const Kernel1D k = gaussian_kernel(s);
    CHECK(sup_diff(convolve_separable(f, k), direct_2d(f, k, k)) <= 1e-9);
    const Kernel1D kd = gaussian_derivative_kernel(s);
    CHECK(sup_diff(convolve_separable(f, kd, k), direct_2d(f, kd, k)) <= 1e-9);
  }
  const ScalarField z(g);
  CHECK(convolve_separable(z, gaussian_kernel(2.0)).max() == 0.0);
}

TEST_CASE("Gaussian smoothing preserves the integral away from the border") {
  std::mt19937_64 eng(2);
  const GridSpec g = GridSpec::make({0, 0}, 0.05, 60, 60);
  ScalarField f(g);
  for (int j = 15; j < 45; ++j) {
    for (int i = 15; i < 45; ++i) f.at(i, j) = uniform(eng, 0, 2);
  }
  CHECK(std::abs(integrate(convolve_separable(f, gaussian_kernel(2.0))) - integrate(f)) <= 1e-6);
}

TEST_CASE("ridge of an all-ones field is zero") {
  const ScalarField ones(GridSpec::make({0, 0}, 0.05, 30, 20), 1.0);
  CHECK(ridge(ones, 2.0).max() == 0.0);
}

TEST_CASE("sparse ridge equals the dense gradient magnitude") {
  std::mt19937_64 eng(4);
  const double h = 0.05;
  const GridSpec g = test::square_grid(2.5, h);
  for (double s : {1.0, 2.0, 3.0}) {
    for (int t = 0; t < 3; ++t) {
      const ScalarField ind = rasterize_polygon(test::random_star(eng, 7, 0.4, 1.5),
                                                Pose2(0, 0, uniform(eng, -3, 3)), g);
      const Kernel1D gk = gaussian_kernel(s), dk = gaussian_derivative_kernel(s);
      const ScalarField gx = convolve_separable(ind, dk, gk);
      const ScalarField gy = convolve_separable(ind, gk, dk);
      const ScalarField r = ridge(ind, s);
      double m = 0.0;
      for (std::size_t n = 0; n < r.samples().size(); ++n) {
        const double dense = std::hypot(gx.samples()[n], gy.samples()[n]) / h;
        m = std::max(m, std::abs(dense - r.samples()[n]));
      }
      CHECK(m <= 1e-9);
    }
  }
}

// Continuum deficit of |grad(g * I)| at a right-angle corner, in units of
// sigma: integral of |gx| + |gy| - |grad| for a quadrant.
double corner_deficit() {
  auto phi = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2 * std::numbers::pi); };
  auto cdf = [](double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); };
  const double d = 0.01;
  double s = 0.0;
  for (double x = -9 + 0.5 * d; x < 9; x += d) {
    for (double y = -9 + 0.5 * d; y < 9; y += d) {
      const double a = phi(x) * cdf(y), b = cdf(x) * phi(y);
      s += a + b - std::hypot(a, b);
    }
  }
  return s * d * d;
}

TEST_CASE("ridge integrates to the perimeter of squares and discs") {
  const double h = 0.05, sigma = 2.0;
  const double corner = corner_deficit() * sigma * h;
  CHECK(corner_deficit() == doctest::Approx(0.8693).epsilon(1e-3));
  for (double side : {2.0, 3.0, 4.0, 5.0}) {
    for (double th : {0.0, 0.3, 0.7}) {
      const GridSpec g = test::square_grid(0.75 * side + 1.0, h, {0.013, 0.029});
      const ScalarField sq = rasterize_polygon(Polygon::rectangle(side, side), Pose2(0, 0, th), g);
      const double got = integrate(ridge(sq, sigma));
      CHECK(std::abs(got - (4 * side - 4 * corner)) <= 0.01 * 4 * side);
      if (side >= 4.0) CHECK(std::abs(got - 4 * side) <= 0.03 * 4 * side);
    }
  }
  for (double r : {1.0, 2.0}) {
    const GridSpec g = test::square_grid(r + 1.0, h);
    std::vector<Vec2> v;
    for (int k = 0; k < 256; ++k) {
      const double a = 2 * std::numbers::pi * k / 256;
      v.push_back({r * std::cos(a), r * std::sin(a)});
    }
    const ScalarField disc = rasterize_polygon(Polygon::make(v), Pose2(), g);
    CHECK(std::abs(integrate(ridge(disc, 2.0)) - 2 * std::numbers::pi * r) <=
          0.03 * 2 * std::numbers::pi * r);
  }
}

TEST_CASE("ridge integral tracks the perimeter of convex polygons") {
  std::mt19937_64 eng(6);
  const double h = 0.05, sigma = 2.0;
  for (int t = 0; t < 20; ++t) {
    // Feature size at least 20 sigma cells.
    const Polygon p = test::random_convex(eng, 7, 20 * sigma * h, 3.0);
    const GridSpec g = test::square_grid(3.6, h);
    const ScalarField ind = rasterize_polygon(p, Pose2(0, 0, uniform(eng, -3, 3)), g);
    CHECK(std::abs(integrate(ridge(ind, sigma)) - p.perimeter()) <= 0.05 * p.perimeter());
  }
}

TEST_CASE("ridge rejects non-indicators") {
  ScalarField f(GridSpec::make({0, 0}, 0.1, 5, 5));
  f.at(2, 2) = 2.0;
  CHECK_THROWS_AS(ridge(f, 2.0), Error);
}

TEST_CASE("zero-covariance density translates the field") {
  std::mt19937_64 eng(9);
  const double h = 0.05;
  const GridSpec g = GridSpec::make({-1, -1}, h, 40, 40);
  const ScalarField f = random_field(eng, g, 0.3);
  const Convolved c = convolve_density(f, LocationDensity::gaussian({3 * h, -5 * h}, {}));
  for (int j = 0; j < g.height; ++j) {
    for (int i = 0; i < g.width; ++i) {
      const int u = i - 3, v = j + 5;
      const double want = u >= 0 && v >= 0 && u < g.width && v < g.height ? f.at(u, v) : 0.0;
      CHECK(c.field.at(i, j) == want);
    }
  }
}

TEST_CASE("Fubini: blurred indicator keeps its area") {
  const double h = 0.05;
  const GridSpec g = test::square_grid(4.0, h);
  const ScalarField ib = rasterize_polygon(Polygon::rectangle(2, 4), Pose2(0, 0, 0.4), g);
  const Convolved c = convolve_density(ib, LocationDensity::gaussian({0.1, -0.2}, {0.09, 0, 0.09}));
  CHECK(c.truncated_fraction <= 1e-9);
  CHECK(std::abs(integrate(c.field) - integrate(ib)) <= 1e-3 * integrate(ib));
}

TEST_CASE("Gaussian and gridded density paths agree") {
  const double h = 0.05;
  const GridSpec g = test::square_grid(3.0, h);
  const ScalarField ib = rasterize_polygon(Polygon::rectangle(1.5, 1.0), Pose2(0, 0, 0.3), g);
  const Vec2 mean{0.3, -0.15};
  for (auto [sx, sy] : {std::pair{0.3, 0.3}, std::pair{0.2, 0.4}}) {
    const Convolved a = convolve_density(ib, LocationDensity::gaussian(mean, {sx * sx, 0, sy * sy}));
    const Convolved b = convolve_density(ib, sampled_gaussian(mean, sx, sy, test::square_grid(2.5, h)));
    CHECK(sup_diff(a.field, b.field) <= 1e-6);
  }
}

TEST_CASE("anisotropic density matches a brute-force scatter") {
  const double h = 0.1;
  const GridSpec g = test::square_grid(2.5, h);
  const ScalarField ib = rasterize_polygon(Polygon::make({{0, 0}, {1, 0}, {0, 0.6}}), Pose2(), g);
  const Mat2 cov{0.09, 0.05, 0.06};
  const Vec2 mean{0.2, 0.1};
  const Convolved c = convolve_density(ib, LocationDensity::gaussian(mean, cov));
  // Masses on the lattice of displacements, cut at Mahalanobis radius 5.
  const double det = cov.xx * cov.yy - cov.xy * cov.xy;
  std::vector<std::tuple<int, int, double>> mass;
  double s = 0.0;
  for (int b = -30; b <= 30; ++b) {
    for (int a = -30; a <= 30; ++a) {
      const double dx = a * h - mean.x, dy = b * h - mean.y;
      const double q = (cov.yy * dx * dx - 2 * cov.xy * dx * dy + cov.xx * dy * dy) / det;
      if (q <= 25.0) {
        mass.emplace_back(a, b, std::exp(-0.5 * q));
        s += std::exp(-0.5 * q);
      }
    }
  }
  ScalarField want(g);
  for (int j = 0; j < g.height; ++j) {
    for (int i = 0; i < g.width; ++i) {
      if (ib.at(i, j) == 0.0) continue;
      for (auto [a, b, m] : mass) {
        const int x = i + a, y = j + b;
        if (x >= 0 && y >= 0 && x < g.width && y < g.height) want.at(x, y) += m / s;
      }
    }
  }
  CHECK(sup_diff(c.field, want) <= 1e-9);
}

TEST_CASE("density convolution is linear") {
  std::mt19937_64 eng(12);
  const GridSpec g = GridSpec::make({0, 0}, 0.05, 50, 50);
  const ScalarField f = random_field(eng, g), k = random_field(eng, g);
  ScalarField mix(g);
  add_scaled(mix, f, 1.7);
  add_scaled(mix, k, -0.4);
  for (const LocationDensity& p :
       {LocationDensity::gaussian({0.2, 0.1}, {0.01, 0, 0.01}),
        LocationDensity::gaussian({0.2, 0.1}, {0.01, 0.004, 0.02})}) {
    ScalarField want = convolve_density(f, p).field;
    for (double& v : want.samples()) v *= 1.7;
    add_scaled(want, convolve_density(k, p).field, -0.4);
    CHECK(sup_diff(convolve_density(mix, p).field, want) <= 1e-9);
  }
}

TEST_CASE("density truncated by the grid raises the warning") {
  const GridSpec g = test::square_grid(1.0, 0.05);
  const ScalarField ib = rasterize_polygon(Polygon::rectangle(0.5, 0.5), Pose2(), g);
  const Convolved c = convolve_density(ib, LocationDensity::gaussian({0.9, 0}, {0.04, 0, 0.04}));
  CHECK(c.truncation_warning());
}

TEST_CASE("density validation") {
  CHECK_THROWS_AS(LocationDensity::gaussian({0, 0}, {1.0, 2.0, 1.0}), Error);
  CHECK_THROWS_AS(LocationDensity::gaussian({0, 0}, {-1.0, 0.0, 1.0}), Error);
  ScalarField bad(GridSpec::make({0, 0}, 0.1, 3, 3), 1.0);
  CHECK_THROWS_AS(LocationDensity::gridded(bad), Error);
  bad.at(0, 0) = -1.0;
  CHECK_THROWS_AS(LocationDensity::gridded(bad), Error);
}

TEST_CASE("integrate and integrate_product") {
  const GridSpec g = GridSpec::make({0.025, 0.025}, 0.05, 20, 20);
  const ScalarField sq = rasterize_polygon(Polygon::make({{0, 0}, {1, 0}, {1, 1}, {0, 1}}),
                                           Pose2(), g);
  CHECK(integrate(sq) == doctest::Approx(1.0));
  CHECK(integrate_product(sq, ScalarField(g, 1.0)) == doctest::Approx(integrate(sq)));

  std::mt19937_64 eng(13);
  for (int t = 0; t < 10; ++t) {
    const ScalarField a = random_field(eng, g, 0.4), b = random_field(eng, g);
    double full = 0.0;
    for (std::size_t n = 0; n < a.samples().size(); ++n) full += a.samples()[n] * b.samples()[n];
    CHECK(std::abs(integrate_product(a, b) - full * g.cell_area()) <= 1e-12);
  }
  const ScalarField off(GridSpec::make({0.0, 0.0}, 0.05, 20, 20));
  CHECK_THROWS_AS(integrate_product(sq, off), Error);
  const ScalarField coarse(GridSpec::make({0.025, 0.025}, 0.1, 20, 20));
  CHECK_THROWS_AS(integrate_product(sq, coarse), Error);
}

TEST_CASE("crossing ridges integrate to 1 / sin(theta)") {
  for (double deg : {30.0, 45.0, 60.0, 90.0}) {
    const double th = deg * std::numbers::pi / 180.0;
    const double want = 1.0 / std::sin(th);
    CHECK(std::abs(ridge_crossing_integral(th, 2.0) - want) <= 0.02 * want);
  }
  for (int k = 0; k <= 10; ++k) {
    const double th = std::numbers::pi / 12 + k * (std::numbers::pi / 2 - std::numbers::pi / 12) / 10;
    CHECK(ridge_crossing_integral(th, 2.0) >= 0.98);
  }
  CHECK_THROWS_AS(ridge_crossing_integral(0.0, 2.0), Error);
  CHECK_THROWS_AS(ridge_crossing_integral(2.0, 2.0), Error);
  CHECK_THROWS_AS(ridge_crossing_integral(1e-4, 2.0), Error);
}
