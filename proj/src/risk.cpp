#include "fpr/risk.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "fpr/error.hpp"

namespace fpr {

namespace {

int kernel_radius(double sigma_cells) {
  return static_cast<int>(std::ceil(4.0 * sigma_cells));
}

struct Extent {
  Vec2 lo;
  Vec2 hi;
};

// World-frame region holding all of a density's mass after truncation.
Extent density_extent(const LocationDensity& p, double resolution) {
  if (p.kind() == LocationDensity::Kind::kGridded) {
    const GridSpec& s = p.grid().spec();
    return {s.origin, s.center(s.width - 1, s.height - 1)};
  }
  const double ex = 5.0 * std::sqrt(p.cov().xx) + 2.0 * resolution;
  const double ey = 5.0 * std::sqrt(p.cov().yy) + 2.0 * resolution;
  return {{p.mean().x - ex, p.mean().y - ey}, {p.mean().x + ex, p.mean().y + ey}};
}

ScalarField body_indicator(const Polygon& shape, double resolution, int pad_cells,
                           const std::string& id) {
  if (shape.area() < resolution * resolution) {
    throw Error(ErrorKind::kPointObstacle,
                "obstacle '" + id + "' is smaller than one grid cell; use the point bound");
  }
  ScalarField ind = rasterize_polygon(shape, Pose2{}, body_grid(shape, resolution, pad_cells));
  if (ind.sum() == 0.0) {
    throw Error(ErrorKind::kPointObstacle,
                "obstacle '" + id + "' covers no cell centers; use the point bound");
  }
  return ind;
}

double mass_over(const ScalarField& region, const DensityMasses& dm) {
  const CellBox box = region.spec().box().intersect(dm.box);
  double s = 0.0;
  for (int j = box.y0; j < box.y1; ++j) {
    for (int i = box.x0; i < box.x1; ++i) {
      if (region.at(i, j) != 0.0) s += dm.masses.at(i - dm.box.x0, j - dm.box.y0);
    }
  }
  return std::clamp(s, 0.0, 1.0);
}

// Lattice of sub x sub points per cell of `spec`, centered within each cell.
GridSpec subsample_grid(const GridSpec& spec, int sub) {
  const double h = spec.resolution;
  const double f = h / sub;
  const Vec2 origin{spec.origin.x - 0.5 * h + 0.5 * f, spec.origin.y - 0.5 * h + 0.5 * f};
  return GridSpec::make(origin, f, spec.width * sub, spec.height * sub);
}

// Fraction of each cell of `spec` covered by the union of `polys`, from
// sub x sub point samples per cell.
ScalarField union_coverage(std::span<const Polygon> polys, const GridSpec& spec, int sub) {
  const ScalarField fine = rasterize_union(polys, subsample_grid(spec, sub));
  ScalarField out(spec);
  const double w = 1.0 / (sub * sub);
  for (int j = 0; j < fine.height(); ++j) {
    for (int i = 0; i < fine.width(); ++i) {
      if (fine.at(i, j) != 0.0) out.at(i / sub, j / sub) += w;
    }
  }
  return out;
}

double coverage_mass(const ScalarField& cover, const DensityMasses& dm) {
  const CellBox box = cover.spec().box().intersect(dm.box);
  double s = 0.0;
  for (int j = box.y0; j < box.y1; ++j) {
    for (int i = box.x0; i < box.x1; ++i) {
      s += cover.at(i, j) * dm.masses.at(i - dm.box.x0, j - dm.box.y0);
    }
  }
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace

bool is_point_obstacle(const Polygon& shape, double resolution) {
  if (shape.area() < resolution * resolution) return true;
  return rasterize_polygon(shape, Pose2{}, body_grid(shape, resolution, 1)).sum() == 0.0;
}

double obstacle_lambda(const Polygon& shape, double resolution) {
  ScalarField ind = body_indicator(shape, resolution, 1, "");
  return 1.0 / (ind.sum() * resolution * resolution);
}

RiskFields precompute_fields(std::span<const Obstacle> obstacles, const GridSpec& spec,
                             double sigma_cells) {
  if (!(sigma_cells > 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "sigma_cells must be positive");
  }
  RiskFields rf{ScalarField(spec), ScalarField(spec), sigma_cells, obstacles.size(), 0.0};
  const double h = spec.resolution;
  const int pad = kernel_radius(sigma_cells) + 2;
  for (const Obstacle& obs : obstacles) {
    const ScalarField ind = body_indicator(obs.effective_shape(), h, pad, obs.id);
    const double lambda = 1.0 / (ind.sum() * h * h);
    const ScalarField rim = ridge(ind, sigma_cells);

    const GridSpec& bs = ind.spec();
    const Extent e = density_extent(obs.density, h);
    const Vec2 lo = bs.origin + e.lo;
    const Vec2 hi = bs.center(bs.width - 1, bs.height - 1) + e.hi;
    const CellBox want{
        static_cast<int>(std::floor((lo.x - spec.origin.x) / h)) - 1,
        static_cast<int>(std::floor((lo.y - spec.origin.y) / h)) - 1,
        static_cast<int>(std::ceil((hi.x - spec.origin.x) / h)) + 2,
        static_cast<int>(std::ceil((hi.y - spec.origin.y) / h)) + 2};
    const CellBox window = want.intersect(spec.box());
    if (window.empty()) {
      rf.max_truncation = 1.0;
      continue;
    }
    const GridSpec ws = spec.crop(window);
    Convolved gk = convolve_density_into(ind, obs.density, ws);
    Convolved dk = convolve_density_into(rim, obs.density, ws);
    add_scaled(rf.g, gk.field, lambda);
    add_scaled(rf.dg_sigma, dk.field, 0.5);
    rf.max_truncation = std::max(rf.max_truncation, gk.truncated_fraction);
  }
  return rf;
}

double fpr_bound(const ScalarField& swept, const RiskFields& rf) {
  if (!same_lattice(swept.spec(), rf.g.spec())) {
    throw Error(ErrorKind::kInvalidInput, "swept area is not on the risk-field lattice");
  }
  const CellBox support = swept.support();
  if (support.empty()) return 0.0;
  const GridSpec win = swept.spec().crop(support.padded(kernel_radius(rf.sigma_cells) + 2));
  const ScalarField a = embed(swept, win);
  const ScalarField rim = ridge(a, rf.sigma_cells);
  return integrate_product(rim, rf.dg_sigma) + integrate_product(a, rf.g);
}

ScalarField point_field(std::span<const LocationDensity> points, const GridSpec& spec) {
  ScalarField g(spec);
  const double inv_area = 1.0 / spec.cell_area();
  for (const LocationDensity& p : points) {
    const DensityMasses dm = density_masses(p, spec.origin, spec.resolution);
    const CellBox box = spec.box().intersect(dm.box);
    for (int j = box.y0; j < box.y1; ++j) {
      for (int i = box.x0; i < box.x1; ++i) {
        g.at(i, j) += dm.masses.at(i - dm.box.x0, j - dm.box.y0) * inv_area;
      }
    }
  }
  return g;
}

double point_bound(std::span<const LocationDensity> points, const ScalarField& swept) {
  return integrate_product(swept, point_field(points, swept.spec()));
}

double laugier_exact(const SweptArea& swept, const Obstacle& obs, double* truncated_fraction,
                     int samples_per_axis) {
  if (samples_per_axis < 1) {
    throw Error(ErrorKind::kInvalidInput, "samples_per_axis must be at least 1");
  }
  const std::vector<Polygon> rb = convex_pieces(reflect(obs.effective_shape()));
  const std::vector<Polygon> fp = convex_pieces(swept.footprint);
  std::vector<Polygon> parts;
  parts.reserve(swept.poses.size() * rb.size() * fp.size());
  for (const Pose2& pose : swept.poses) {
    for (const Polygon& f : fp) {
      const Polygon pf = posed(f, pose);
      for (const Polygon& b : rb) parts.push_back(minkowski_sum(pf, b));
    }
  }
  const GridSpec& grid = swept.grid;
  const DensityMasses dm = density_masses(obs.density, grid.origin, grid.resolution);
  if (truncated_fraction != nullptr) {
    *truncated_fraction = std::max(0.0, 1.0 - dm.masses.sum());
  }
  // Only cells carrying density mass matter.
  const CellBox box = cell_bounds(parts, grid).intersect(dm.box);
  if (box.empty()) return 0.0;
  if (dm.masses.width() * dm.masses.height() == 1) {
    return mass_over(rasterize_union(parts, grid.crop(box)),
                     density_masses(obs.density, grid.crop(box).origin, grid.resolution));
  }
  const GridSpec local = grid.crop(box);
  if (obs.density.kind() == LocationDensity::Kind::kGridded) {
    // Piecewise constant per cell: weight each cell's mass by its coverage.
    const ScalarField cover = union_coverage(parts, local, samples_per_axis);
    return coverage_mass(cover, density_masses(obs.density, local.origin, grid.resolution));
  }
  // Gaussian: integrate on the sub-sample lattice itself.
  const GridSpec fine = subsample_grid(local, samples_per_axis);
  return mass_over(rasterize_union(parts, fine),
                   density_masses(obs.density, fine.origin, fine.resolution));
}

double laugier_exact(const ScalarField& swept, const Obstacle& obs) {
  const double h = swept.spec().resolution;
  const ScalarField body = body_indicator(obs.effective_shape(), h, 1, obs.id);
  const CellBox support = swept.support();
  if (support.empty()) return 0.0;
  const int pad = std::max(body.width(), body.height()) + 1;
  const ScalarField a = embed(swept, swept.spec().crop(support.padded(pad)));
  const ScalarField region = minkowski_dilate(a, reflect(body));
  const DensityMasses dm = density_masses(obs.density, region.spec().origin, h);
  return mass_over(region, dm);
}

ExactTotal exact_total(std::span<const double> per_obstacle) {
  double sum = 0.0, log_miss = 0.0;
  for (double p : per_obstacle) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::kInvalidInput,
                  "per-obstacle probability out of [0, 1]: " + std::to_string(p));
    }
    sum += p;
    log_miss += std::log1p(-p);
  }
  const double p_d = std::min(-std::expm1(log_miss), std::min(sum, 1.0));
  return {p_d, sum};
}

}  // namespace fpr
