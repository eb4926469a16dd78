#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fpr/error.hpp"
#include "fpr/geometry.hpp"
#include "support.hpp"

using namespace fpr;
using fpr::test::cells_area;

namespace {

double shoelace(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % v.size()];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

// Brute-force cell-center membership, boundary inclusive.
bool inside_or_on(const std::vector<Vec2>& v, Vec2 p) {
  bool in = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    const Vec2 a = v[j], b = v[i];
    const double cr = cross(b - a, p - a);
    if (std::abs(cr) <= 1e-12 && dot(p - a, p - b) <= 1e-12) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) in = !in;
    }
  }
  return in;
}

ScalarField brute_dilate(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.spec());
  const double h = a.spec().resolution;
  for (int j = 0; j < a.height(); ++j) {
    for (int i = 0; i < a.width(); ++i) {
      if (a.at(i, j) == 0.0) continue;
      for (int v = 0; v < b.height(); ++v) {
        for (int u = 0; u < b.width(); ++u) {
          if (b.at(u, v) == 0.0) continue;
          const Vec2 off = b.spec().center(u, v);
          const int di = static_cast<int>(std::lround(off.x / h));
          const int dj = static_cast<int>(std::lround(off.y / h));
          const int x = i + di, y = j + dj;
          if (x >= 0 && y >= 0 && x < a.width() && y < a.height()) out.at(x, y) = 1.0;
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("polygon area matches shoelace and closed forms") {
  CHECK(polygon_area(Polygon::rectangle(1.0, 1.0)) == doctest::Approx(1.0));
  CHECK(polygon_area(Polygon::make({{0, 0}, {1, 0}, {0, 1}})) == doctest::Approx(0.5));
  CHECK(polygon_area(Polygon::rectangle(2.0, 4.0)) == doctest::Approx(8.0));

  std::mt19937_64 eng(3);
  for (int t = 0; t < 50; ++t) {
    const Polygon p = test::random_star(eng, 3 + t % 9, 0.3, 2.0);
    CHECK(polygon_area(p) > 0.0);
    CHECK(polygon_area(p) == doctest::Approx(shoelace(p.vertices())).epsilon(1e-12));
  }
}

TEST_CASE("polygon construction validates and orients") {
  const Polygon cw = Polygon::make({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(shoelace(cw.vertices()) > 0.0);
  CHECK(cw.area() == doctest::Approx(1.0));

  auto kind_of = [](std::vector<Vec2> v) {
    try {
      Polygon::make(std::move(v));
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kNumerical;
  };
  CHECK(kind_of({{0, 0}, {1, 1}, {1, 0}, {0, 1}}) == ErrorKind::kInvalidShape);
  CHECK(kind_of({{0, 0}, {1, 0}, {2, 0}}) == ErrorKind::kInvalidShape);
  CHECK(kind_of({{0, 0}, {1, 0}}) == ErrorKind::kInvalidShape);
  CHECK(kind_of({{0, 0}, {1, 0}, {0, NAN}}) == ErrorKind::kInvalidShape);
}

TEST_CASE("pose normalization keeps theta in (-pi, pi]") {
  CHECK(Pose2(0, 0, std::numbers::pi).theta == doctest::Approx(std::numbers::pi));
  CHECK(Pose2(0, 0, -std::numbers::pi).theta == doctest::Approx(std::numbers::pi));
  CHECK(Pose2(0, 0, 3 * std::numbers::pi).theta == doctest::Approx(std::numbers::pi));
  CHECK(Pose2(0, 0, 7.0).theta == doctest::Approx(7.0 - 2 * std::numbers::pi));
}

TEST_CASE("rasterize unit square on a 2x2 grid") {
  const GridSpec g = GridSpec::make({0.25, 0.25}, 0.5, 2, 2);
  const ScalarField f = rasterize_polygon(Polygon::make({{0, 0}, {1, 0}, {1, 1}, {0, 1}}),
                                          Pose2(), g);
  for (double v : f.samples()) CHECK(v == 1.0);
  CHECK(cells_area(f) == doctest::Approx(1.0));
}

TEST_CASE("polygon outside the grid rasterizes to zeros") {
  const GridSpec g = GridSpec::make({0, 0}, 0.1, 20, 20);
  const ScalarField f = rasterize_polygon(Polygon::rectangle(1, 1), Pose2(50, 50, 0.3), g);
  CHECK(f.sum() == 0.0);
}

TEST_CASE("rotated square area within half a percent") {
  // Generic placement: edges do not run through rows of cell centers.
  const GridSpec g = test::square_grid(2.0, 0.05, {0.0123, 0.0371});
  const ScalarField f =
      rasterize_polygon(Polygon::rectangle(2, 2), Pose2(0, 0, std::numbers::pi / 4), g);
  CHECK(std::abs(cells_area(f) - 4.0) <= 0.005 * 4.0);
}

TEST_CASE("rasterization agrees with brute-force cell-center test") {
  std::mt19937_64 eng(11);
  const GridSpec g = GridSpec::make({-2.0, -2.0}, 0.1, 41, 41);
  for (int t = 0; t < 20; ++t) {
    const Polygon p = test::random_star(eng, 5 + t % 6, 0.4, 1.8);
    const Pose2 pose(uniform(eng, -0.2, 0.2), uniform(eng, -0.2, 0.2), uniform(eng, -3, 3));
    const ScalarField f = rasterize_polygon(p, pose, g);
    const Polygon w = posed(p, pose);
    int mismatches = 0;
    for (int j = 0; j < g.height; ++j) {
      for (int i = 0; i < g.width; ++i) {
        if ((f.at(i, j) != 0.0) != inside_or_on(w.vertices(), g.center(i, j))) ++mismatches;
      }
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("rasterized area converges within 2 * perimeter * resolution") {
  std::mt19937_64 eng(5);
  for (double res : {0.2, 0.1, 0.05}) {
    const GridSpec g = test::square_grid(3.0, res);
    for (int t = 0; t < 20; ++t) {
      const Polygon p = t % 2 ? test::random_star(eng, 4 + t % 7, 0.5, 2.5)
                              : test::random_convex(eng, 8, 0.5, 2.5);
      const Pose2 pose(uniform(eng, -0.3, 0.3), uniform(eng, -0.3, 0.3), uniform(eng, -3, 3));
      const double a = cells_area(rasterize_polygon(p, pose, g));
      CHECK(std::abs(a - p.area()) <= 2.0 * p.perimeter() * res);
    }
  }
}

TEST_CASE("degenerate polygon on rasterization is an invalid shape") {
  // A valid polygon scaled down below the area floor.
  const Polygon tiny = scaled_about_centroid(Polygon::rectangle(1, 1), 1e-7);
  const GridSpec g = GridSpec::make({0, 0}, 0.1, 4, 4);
  CHECK_THROWS_AS(rasterize_polygon(tiny, Pose2(), g), Error);
}

TEST_CASE("joint translation of polygon and grid is bit-identical") {
  std::mt19937_64 eng(7);
  const GridSpec g = GridSpec::make({-3.0, -3.0}, 0.05, 121, 121);
  for (int t = 0; t < 10; ++t) {
    const Polygon p = test::random_star(eng, 7, 0.5, 2.5);
    const Pose2 pose(uniform(eng, -0.2, 0.2), uniform(eng, -0.2, 0.2), uniform(eng, -3, 3));
    const Vec2 d{uniform(eng, -40, 40), uniform(eng, -40, 40)};
    const GridSpec g2 = GridSpec::make(g.origin + d, g.resolution, g.width, g.height);
    const ScalarField a = rasterize_polygon(p, pose, g);
    const ScalarField b = rasterize_polygon(p, Pose2(pose.x + d.x, pose.y + d.y, pose.theta), g2);
    CHECK(std::equal(a.samples().begin(), a.samples().end(), b.samples().begin()));
  }
}

TEST_CASE("single-pose sweep equals rasterize_polygon") {
  const GridSpec g = test::square_grid(4.0, 0.05);
  const Polygon car = Polygon::rectangle(4, 2);
  const Pose2 pose(0.3, -0.2, 0.7);
  const Path p{"one", {{0.0, pose}}};
  CHECK(swept_indicator(p, car, g) == rasterize_polygon(car, pose, g));
}

TEST_CASE("straight sweep of a car covers the closed-form rectangle") {
  const GridSpec g = GridSpec::make({-4.0123, -3.0171}, 0.05, 361, 121);
  const Path p = test::straight_path({0, 0}, {10, 0}, 0.5);
  const ScalarField f = swept_indicator(p, Polygon::rectangle(4, 2), g);
  CHECK(std::abs(cells_area(f) - 28.0) <= 0.01 * 28.0);
}

TEST_CASE("sweep is invariant under reversal and retracing") {
  const GridSpec g = test::square_grid(9.0, 0.05);
  const Polygon car = Polygon::rectangle(4, 2);
  const Path fwd = test::arc_path({0, 0}, 5.0, 0.0, 2.0, 20);
  Path rev = fwd, there_and_back = fwd;
  std::reverse(rev.poses.begin(), rev.poses.end());
  for (std::size_t k = fwd.poses.size() - 1; k-- > 0;) {
    there_and_back.poses.push_back({there_and_back.poses.back().t + 1.0, fwd.poses[k].pose});
  }
  const ScalarField a = swept_indicator(fwd, car, g);
  CHECK(swept_indicator(rev, car, g) == a);
  CHECK(swept_indicator(there_and_back, car, g) == a);
}

TEST_CASE("pose refinement changes the sweep by at most a boundary sliver") {
  const GridSpec g = test::square_grid(9.0, 0.05);
  const Polygon car = Polygon::rectangle(4, 2);
  const Path coarse = test::arc_path({0, 0}, 5.0, 0.0, 2.0, 10);
  const Path fine = test::arc_path({0, 0}, 5.0, 0.0, 2.0, 80);
  const ScalarField a = swept_indicator(coarse, car, g);
  const ScalarField b = swept_indicator(fine, car, g);
  int diff = 0, boundary = 0;
  for (int j = 1; j + 1 < g.height; ++j) {
    for (int i = 1; i + 1 < g.width; ++i) {
      if (a.at(i, j) != b.at(i, j)) ++diff;
      if (b.at(i, j) != 0.0 && (b.at(i - 1, j) == 0 || b.at(i + 1, j) == 0 ||
                                b.at(i, j - 1) == 0 || b.at(i, j + 1) == 0)) {
        ++boundary;
      }
    }
  }
  // Differences only from sub-cell boundary motion: within the boundary band.
  CHECK(diff <= boundary);
}

TEST_CASE("resampled poses move every footprint vertex by at most half a cell") {
  const Polygon car = Polygon::rectangle(4, 2);
  const Path p = test::arc_path({0, 0}, 5.0, 0.0, 2.5, 6);
  const double res = 0.05;
  const std::vector<Pose2> poses = resample_poses(p, car, res);
  REQUIRE(poses.size() > p.poses.size());
  for (std::size_t k = 1; k < poses.size(); ++k) {
    for (Vec2 v : car.vertices()) {
      CHECK(norm(transform(poses[k], v) - transform(poses[k - 1], v)) <= 0.5 * res + 1e-12);
    }
  }
  CHECK_THROWS_AS(resample_poses(Path{"empty", {}}, car, res), Error);
}

TEST_CASE("empty path sweep is an invalid-input error") {
  try {
    swept_indicator(Path{"e", {}}, Polygon::rectangle(1, 1), test::square_grid(1, 0.1));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidInput);
  }
}

TEST_CASE("dilation by a single origin cell is the identity") {
  const GridSpec g = test::square_grid(3.0, 0.05);
  const ScalarField a = rasterize_polygon(Polygon::make({{0, 0}, {2, 0.5}, {0.5, 2}}), Pose2(), g);
  const ScalarField point(GridSpec::make({0, 0}, 0.05, 1, 1), 1.0);
  CHECK(minkowski_dilate(a, point) == a);
}

TEST_CASE("dilation of squares gives the closed-form square") {
  const double h = 0.05;
  const GridSpec g = GridSpec::make({-3.0 + 0.5 * h, -3.0 + 0.5 * h}, h, 120, 120);
  const ScalarField a = rasterize_polygon(Polygon::rectangle(2, 2), Pose2(), g);
  const Polygon b = Polygon::rectangle(1, 1);
  const ScalarField ib = rasterize_polygon(b, Pose2(), body_grid(b, h, 0));
  const ScalarField ab = minkowski_dilate(a, ib);
  CHECK(std::abs(cells_area(ab) - 9.0) <= 0.02 * 9.0);
}

TEST_CASE("dilation matches brute force and is commutative in area") {
  std::mt19937_64 eng(21);
  const double h = 0.1;
  for (int t = 0; t < 8; ++t) {
    const Polygon pa = test::random_star(eng, 6, 0.3, 1.2);
    const Polygon pb = test::random_star(eng, 5, 0.2, 0.8);
    const GridSpec g = GridSpec::make({-3.0, -3.0}, h, 61, 61);
    const ScalarField a = rasterize_polygon(pa, Pose2(), g);
    const ScalarField b = rasterize_polygon(pb, Pose2(), g);
    const ScalarField ib = rasterize_polygon(pb, Pose2(), body_grid(pb, h, 1));
    const ScalarField ia = rasterize_polygon(pa, Pose2(), body_grid(pa, h, 1));
    const ScalarField ab = minkowski_dilate(a, ib);
    CHECK(ab == brute_dilate(a, ib));
    CHECK(ab.sum() == minkowski_dilate(b, ia).sum());
  }
}

TEST_CASE("dilation rejects non-indicators") {
  const GridSpec g = GridSpec::make({0, 0}, 0.1, 4, 4);
  ScalarField a(g, 0.0), b(GridSpec::make({0, 0}, 0.1, 1, 1), 1.0);
  a.at(1, 1) = 0.5;
  CHECK_THROWS_AS(minkowski_dilate(a, b), Error);
}

TEST_CASE("reflected field mirrors through the origin") {
  const Polygon p = Polygon::make({{0, 0}, {1, 0}, {0, 0.5}});
  const GridSpec bg = body_grid(p, 0.1, 1);
  const ScalarField f = rasterize_polygon(p, Pose2(), bg);
  const ScalarField r = reflect(f);
  const ScalarField direct = rasterize_polygon(reflect(p), Pose2(), r.spec());
  CHECK(r == direct);
}

TEST_CASE("convex intersection agrees with sampled overlap") {
  std::mt19937_64 eng(8);
  for (int t = 0; t < 200; ++t) {
    const Polygon a = test::random_convex(eng, 6, 0.3, 1.0);
    const Polygon b = posed(test::random_convex(eng, 6, 0.3, 1.0),
                            Pose2(uniform(eng, -2, 2), uniform(eng, -2, 2), 0));
    const bool sat = convex_intersect(a, b);
    bool found = false;
    for (int s = 0; s < 4000 && !found; ++s) {
      const Vec2 q{uniform(eng, -1, 1), uniform(eng, -1, 1)};
      found = contains(a, q) && contains(b, q);
    }
    if (found) CHECK(sat);
  }
}

TEST_CASE("inflation approximates the rounded offset area") {
  const Polygon sq = Polygon::rectangle(2, 2);
  const double r = 0.5;
  const Polygon inf = inflate(sq, r);
  const double exact = 4.0 + 4.0 * 2.0 * r + std::numbers::pi * r * r;
  CHECK(inf.area() >= exact);
  CHECK(inf.area() <= exact * 1.01);
  CHECK(inflate(sq, 0.0) == sq);
}
