#include "fpr/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpr/error.hpp"

namespace fpr {

namespace {

// Densities are cut at this many standard deviations.
constexpr double kDensityCutoff = 5.0;
// A std below this fraction of a cell is treated as a point mass.
constexpr double kDeltaStdCells = 0.25;

void check_sigma(double sigma_cells) {
  if (!(sigma_cells > 0.0) || !std::isfinite(sigma_cells)) {
    throw Error(ErrorKind::kInvalidInput,
                "sigma_cells must be positive, got " + std::to_string(sigma_cells));
  }
}

void check_resolution(const GridSpec& a, const GridSpec& b) {
  if (std::abs(a.resolution - b.resolution) > 1e-12 * a.resolution) {
    throw Error(ErrorKind::kInvalidInput, "fields have different resolutions");
  }
}

// Cumulative sums D(m) = sum_{k <= m} d[k] for m in [-r, r].
std::vector<double> cumulative(const Kernel1D& d) {
  std::vector<double> c(d.taps.size());
  double s = 0.0;
  for (std::size_t k = 0; k < d.taps.size(); ++k) {
    s += d.taps[k];
    c[k] = s;
  }
  return c;
}

std::vector<double> gaussian_factor(double center, double std_cells, int& first) {
  if (std_cells < kDeltaStdCells) {
    first = static_cast<int>(std::lround(center));
    return {1.0};
  }
  first = static_cast<int>(std::floor(center - kDensityCutoff * std_cells));
  int last = static_cast<int>(std::ceil(center + kDensityCutoff * std_cells));
  std::vector<double> w(static_cast<std::size_t>(last - first + 1));
  double s = 0.0;
  for (int a = first; a <= last; ++a) {
    double z = (a - center) / std_cells;
    double v = std::abs(z) <= kDensityCutoff ? std::exp(-0.5 * z * z) : 0.0;
    w[static_cast<std::size_t>(a - first)] = v;
    s += v;
  }
  for (double& v : w) v /= s;
  return w;
}

}  // namespace

Kernel1D gaussian_kernel(double sigma_cells) {
  check_sigma(sigma_cells);
  const int r = static_cast<int>(std::ceil(4.0 * sigma_cells));
  Kernel1D k{std::vector<double>(static_cast<std::size_t>(2 * r + 1)), sigma_cells};
  double s = 0.0;
  for (int i = -r; i <= r; ++i) {
    double v = std::exp(-0.5 * i * i / (sigma_cells * sigma_cells));
    k.taps[static_cast<std::size_t>(i + r)] = v;
    s += v;
  }
  for (double& v : k.taps) v /= s;
  return k;
}

Kernel1D gaussian_derivative_kernel(double sigma_cells) {
  check_sigma(sigma_cells);
  const int r = static_cast<int>(std::ceil(4.0 * sigma_cells));
  Kernel1D k{std::vector<double>(static_cast<std::size_t>(2 * r + 1)), sigma_cells};
  double moment = 0.0;
  for (int i = -r; i <= r; ++i) {
    double e = std::exp(-0.5 * i * i / (sigma_cells * sigma_cells));
    k.taps[static_cast<std::size_t>(i + r)] = -i * e;
    moment += i * i * e;
  }
  for (double& v : k.taps) v /= moment;
  return k;
}

ScalarField convolve_separable(const ScalarField& f, const Kernel1D& kx,
                               const Kernel1D& ky) {
  const int w = f.width(), h = f.height();
  ScalarField tmp(f.spec());
  const int rx = kx.radius(), ry = ky.radius();
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      double s = 0.0;
      for (int k = std::max(-rx, i - w + 1); k <= std::min(rx, i); ++k) {
        s += kx[k] * f.at(i - k, j);
      }
      tmp.at(i, j) = s;
    }
  }
  ScalarField out(f.spec());
  for (int j = 0; j < h; ++j) {
    for (int k = std::max(-ry, j - h + 1); k <= std::min(ry, j); ++k) {
      const double t = ky[k];
      for (int i = 0; i < w; ++i) out.at(i, j) += t * tmp.at(i, j - k);
    }
  }
  return out;
}

ScalarField convolve_separable(const ScalarField& f, const Kernel1D& k) {
  return convolve_separable(f, k, k);
}

ScalarField ridge(const ScalarField& ind, double sigma_cells) {
  if (!ind.is_indicator()) {
    throw Error(ErrorKind::kInvalidInput, "ridge expects an indicator field");
  }
  const Kernel1D g = gaussian_kernel(sigma_cells);
  const Kernel1D d = gaussian_derivative_kernel(sigma_cells);
  const std::vector<double> cum = cumulative(d);
  const int r = d.radius();
  const int w = ind.width(), h = ind.height();

  // First pass: derivative along x (tx) and along y (ty), from run ends.
  ScalarField tx(ind.spec()), ty(ind.spec());
  auto edge_x = [&](int j, int at, double sign) {
    for (int m = -r; m < r; ++m) {
      int i = at + m;
      if (i >= 0 && i < w) tx.at(i, j) += sign * cum[static_cast<std::size_t>(m + r)];
    }
  };
  auto edge_y = [&](int i, int at, double sign) {
    for (int m = -r; m < r; ++m) {
      int j = at + m;
      if (j >= 0 && j < h) ty.at(i, j) += sign * cum[static_cast<std::size_t>(m + r)];
    }
  };
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const bool v = ind.at(i, j) != 0.0;
      // Border values continue outward, so the grid edge is not a boundary.
      const bool left = i > 0 ? ind.at(i - 1, j) != 0.0 : v;
      const bool below = j > 0 ? ind.at(i, j - 1) != 0.0 : v;
      if (v && !left) edge_x(j, i, 1.0);
      if (!v && left) edge_x(j, i, -1.0);
      if (v && !below) edge_y(i, j, 1.0);
      if (!v && below) edge_y(i, j, -1.0);
    }
  }

  // Second pass: smooth across, scattering only nonzero samples.
  ScalarField dx(ind.spec()), dy(ind.spec());
  const int rg = g.radius();
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const double vx = tx.at(i, j);
      if (vx != 0.0) {
        for (int k = std::max(-rg, -j); k <= std::min(rg, h - 1 - j); ++k) {
          dx.at(i, j + k) += g[k] * vx;
        }
      }
      const double vy = ty.at(i, j);
      if (vy != 0.0) {
        for (int k = std::max(-rg, -i); k <= std::min(rg, w - 1 - i); ++k) {
          dy.at(i + k, j) += g[k] * vy;
        }
      }
    }
  }
  ScalarField out(ind.spec());
  const double inv_h = 1.0 / ind.spec().resolution;
  auto o = out.samples();
  auto ax = dx.samples();
  auto ay = dy.samples();
  for (std::size_t n = 0; n < o.size(); ++n) {
    if (ax[n] != 0.0 || ay[n] != 0.0) o[n] = std::hypot(ax[n], ay[n]) * inv_h;
  }
  return out;
}

LocationDensity LocationDensity::gaussian(Vec2 mean, Mat2 cov) {
  if (!std::isfinite(mean.x) || !std::isfinite(mean.y) || !std::isfinite(cov.xx) ||
      !std::isfinite(cov.xy) || !std::isfinite(cov.yy)) {
    throw Error(ErrorKind::kInvalidInput, "gaussian density has non-finite parameters");
  }
  const bool zero = cov.xx == 0.0 && cov.xy == 0.0 && cov.yy == 0.0;
  if (!zero && !(cov.xx > 0.0 && cov.yy > 0.0 && cov.xx * cov.yy - cov.xy * cov.xy > 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "covariance must be positive-definite or zero");
  }
  LocationDensity p;
  p.kind_ = Kind::kGaussian;
  p.mean_ = mean;
  p.cov_ = cov;
  return p;
}

LocationDensity LocationDensity::gridded(ScalarField density) {
  if (density.spec().size() == 0) {
    throw Error(ErrorKind::kInvalidInput, "gridded density is empty");
  }
  double mass = 0.0, mx = 0.0, my = 0.0;
  for (int j = 0; j < density.height(); ++j) {
    for (int i = 0; i < density.width(); ++i) {
      double v = density.at(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw Error(ErrorKind::kInvalidInput, "gridded density must be finite and non-negative");
      }
      Vec2 c = density.spec().center(i, j);
      mass += v;
      mx += v * c.x;
      my += v * c.y;
    }
  }
  const double total = mass * density.spec().cell_area();
  if (std::abs(total - 1.0) > 1e-6) {
    throw Error(ErrorKind::kInvalidInput,
                "gridded density integrates to " + std::to_string(total) + ", expected 1");
  }
  LocationDensity p;
  p.kind_ = Kind::kGridded;
  p.mean_ = {mx / mass, my / mass};
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int j = 0; j < density.height(); ++j) {
    for (int i = 0; i < density.width(); ++i) {
      Vec2 c = density.spec().center(i, j) - p.mean_;
      double v = density.at(i, j) / mass;
      sxx += v * c.x * c.x;
      syy += v * c.y * c.y;
      sxy += v * c.x * c.y;
    }
  }
  p.cov_ = {sxx, sxy, syy};
  p.grid_ = std::move(density);
  return p;
}

double LocationDensity::max_std() const {
  double tr = 0.5 * (cov_.xx + cov_.yy);
  double det = cov_.xx * cov_.yy - cov_.xy * cov_.xy;
  double lmax = tr + std::sqrt(std::max(0.0, tr * tr - det));
  return std::sqrt(std::max(0.0, lmax));
}

LocationDensity LocationDensity::shifted(Vec2 d) const {
  LocationDensity p = *this;
  p.mean_ = p.mean_ + d;
  if (kind_ == Kind::kGridded) {
    GridSpec s = grid_.spec();
    s.origin = s.origin + d;
    p.grid_ = ScalarField(s, std::vector<double>(grid_.samples().begin(),
                                                 grid_.samples().end()));
  }
  return p;
}

DensityMasses density_masses(const LocationDensity& p, Vec2 base, double resolution) {
  const double h = resolution;
  DensityMasses out;
  if (p.kind() == LocationDensity::Kind::kGridded) {
    const GridSpec& gs = p.grid().spec();
    if (std::abs(gs.resolution - h) > 1e-12 * h) {
      throw Error(ErrorKind::kInvalidInput, "gridded density resolution differs from the grid");
    }
    const double ax = (gs.origin.x - base.x) / h, ay = (gs.origin.y - base.y) / h;
    if (std::abs(ax - std::round(ax)) > 1e-6 || std::abs(ay - std::round(ay)) > 1e-6) {
      throw Error(ErrorKind::kInvalidInput, "gridded density is not aligned with the grid lattice");
    }
    const int x0 = static_cast<int>(std::lround(ax)), y0 = static_cast<int>(std::lround(ay));
    out.box = {x0, y0, x0 + gs.width, y0 + gs.height};
    GridSpec ms{{0.0, 0.0}, h, gs.width, gs.height};
    out.masses = ScalarField(ms);
    const double ca = gs.cell_area();
    for (std::size_t n = 0; n < gs.size(); ++n) out.masses.samples()[n] = p.grid().samples()[n] * ca;
    return out;
  }

  const Mat2& c = p.cov();
  const double cx = (p.mean().x - base.x) / h, cy = (p.mean().y - base.y) / h;
  const double max_std = p.max_std() / h;
  if (max_std < kDeltaStdCells || c.xy == 0.0) {
    int x0 = 0, y0 = 0;
    const bool point = max_std < kDeltaStdCells;
    out.mx = gaussian_factor(cx, point ? 0.0 : std::sqrt(c.xx) / h, x0);
    out.my = gaussian_factor(cy, point ? 0.0 : std::sqrt(c.yy) / h, y0);
    const int nx = static_cast<int>(out.mx.size()), ny = static_cast<int>(out.my.size());
    out.box = {x0, y0, x0 + nx, y0 + ny};
    out.masses = ScalarField(GridSpec{{0.0, 0.0}, h, nx, ny});
    for (int b = 0; b < ny; ++b) {
      for (int a = 0; a < nx; ++a) out.masses.at(a, b) = out.mx[a] * out.my[b];
    }
    return out;
  }

  const double sx = std::sqrt(c.xx) / h, sy = std::sqrt(c.yy) / h;
  const int x0 = static_cast<int>(std::floor(cx - kDensityCutoff * sx));
  const int x1 = static_cast<int>(std::ceil(cx + kDensityCutoff * sx));
  const int y0 = static_cast<int>(std::floor(cy - kDensityCutoff * sy));
  const int y1 = static_cast<int>(std::ceil(cy + kDensityCutoff * sy));
  out.box = {x0, y0, x1 + 1, y1 + 1};
  out.masses = ScalarField(GridSpec{{0.0, 0.0}, h, out.box.width(), out.box.height()});
  // Inverse covariance in cell units.
  const double det = (c.xx * c.yy - c.xy * c.xy) / (h * h * h * h);
  const double ixx = c.yy / (h * h) / det, iyy = c.xx / (h * h) / det;
  const double ixy = -c.xy / (h * h) / det;
  const double cut2 = kDensityCutoff * kDensityCutoff;
  double s = 0.0;
  for (int b = y0; b <= y1; ++b) {
    for (int a = x0; a <= x1; ++a) {
      double dx = a - cx, dy = b - cy;
      double q = ixx * dx * dx + 2.0 * ixy * dx * dy + iyy * dy * dy;
      double v = q <= cut2 ? std::exp(-0.5 * q) : 0.0;
      out.masses.at(a - x0, b - y0) = v;
      s += v;
    }
  }
  for (double& v : out.masses.samples()) v /= s;
  return out;
}

Convolved convolve_density_into(const ScalarField& f, const LocationDensity& p,
                                const GridSpec& out_spec) {
  check_resolution(f.spec(), out_spec);
  const DensityMasses dm = density_masses(p, out_spec.origin - f.spec().origin,
                                          out_spec.resolution);
  Convolved res{ScalarField(out_spec), 0.0};
  ScalarField& out = res.field;
  const int fw = f.width(), fh = f.height();
  const int ow = out_spec.width, oh = out_spec.height;
  const int x0 = dm.box.x0, y0 = dm.box.y0;

  if (!dm.mx.empty()) {
    const int nx = static_cast<int>(dm.mx.size()), ny = static_cast<int>(dm.my.size());
    // tmp(i, v) = sum_a mx[a] f(i - x0 - a, v)
    std::vector<double> tmp(static_cast<std::size_t>(ow) * fh, 0.0);
    for (int v = 0; v < fh; ++v) {
      double* trow = &tmp[static_cast<std::size_t>(v) * ow];
      for (int u = 0; u < fw; ++u) {
        const double fv = f.at(u, v);
        if (fv == 0.0) continue;
        const int a_lo = std::max(0, -u - x0), a_hi = std::min(nx - 1, ow - 1 - u - x0);
        for (int a = a_lo; a <= a_hi; ++a) trow[u + x0 + a] += dm.mx[a] * fv;
      }
    }
    for (int v = 0; v < fh; ++v) {
      const double* trow = &tmp[static_cast<std::size_t>(v) * ow];
      const int b_lo = std::max(0, -v - y0), b_hi = std::min(ny - 1, oh - 1 - v - y0);
      for (int b = b_lo; b <= b_hi; ++b) {
        const double m = dm.my[b];
        const int j = v + y0 + b;
        for (int i = 0; i < ow; ++i) out.at(i, j) += m * trow[i];
      }
    }
  } else {
    const ScalarField& ms = dm.masses;
    for (int v = 0; v < fh; ++v) {
      for (int u = 0; u < fw; ++u) {
        const double fv = f.at(u, v);
        if (fv == 0.0) continue;
        const int b_lo = std::max(0, -v - y0), b_hi = std::min(ms.height() - 1, oh - 1 - v - y0);
        const int a_lo = std::max(0, -u - x0), a_hi = std::min(ms.width() - 1, ow - 1 - u - x0);
        for (int b = b_lo; b <= b_hi; ++b) {
          for (int a = a_lo; a <= a_hi; ++a) {
            out.at(u + x0 + a, v + y0 + b) += fv * ms.at(a, b);
          }
        }
      }
    }
  }

  const double in = f.sum();
  if (in > 0.0) res.truncated_fraction = std::max(0.0, 1.0 - out.sum() / in);
  return res;
}

Convolved convolve_density(const ScalarField& f, const LocationDensity& p) {
  return convolve_density_into(f, p, f.spec());
}

double integrate(const ScalarField& f) { return f.sum() * f.spec().cell_area(); }

double integrate_product(const ScalarField& a, const ScalarField& b) {
  check_resolution(a.spec(), b.spec());
  auto [ox, oy] = lattice_offset(a.spec(), b.spec());
  const CellBox box = a.spec().box().intersect(
      CellBox{ox, oy, ox + b.width(), oy + b.height()});
  double s = 0.0;
  for (int j = box.y0; j < box.y1; ++j) {
    for (int i = box.x0; i < box.x1; ++i) {
      const double va = a.at(i, j);
      if (va != 0.0) s += va * b.at(i - ox, j - oy);
    }
  }
  return s * a.spec().cell_area();
}

double ridge_crossing_integral(double theta, double sigma_cells) {
  check_sigma(sigma_cells);
  constexpr double kHalfPi = 1.5707963267948966;
  if (!(theta > 0.0) || theta > kHalfPi + 1e-12) {
    throw Error(ErrorKind::kInvalidInput, "crossing angle must lie in (0, pi/2]");
  }
  constexpr int kMaxDisc = 4000;
  const double st = std::sin(theta), ct = std::cos(theta);
  const double disc_d = std::ceil(8.0 * sigma_cells / st) + 2.0;
  if (disc_d > kMaxDisc) {
    throw Error(ErrorKind::kInvalidInput, "crossing angle too small for the grid support");
  }
  const int disc = static_cast<int>(disc_d);
  const int r = static_cast<int>(std::ceil(4.0 * sigma_cells));
  const int half = disc + r + 4;
  const int n = 2 * half + 1;
  // Generic crossing point so that no cell center lies on either edge.
  const Vec2 c{0.3719, 0.2113};
  GridSpec spec{{static_cast<double>(-half), static_cast<double>(-half)}, 1.0, n, n};
  ScalarField h1(spec), h2(spec);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Vec2 p = spec.center(i, j) - c;
      h1.at(i, j) = p.y >= 0.0 ? 1.0 : 0.0;
      h2.at(i, j) = -st * p.x + ct * p.y >= 0.0 ? 1.0 : 0.0;
    }
  }
  const ScalarField r1 = ridge(h1, sigma_cells);
  const ScalarField r2 = ridge(h2, sigma_cells);
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Vec2 p = spec.center(i, j) - c;
      if (p.x * p.x + p.y * p.y <= disc_d * disc_d) s += r1.at(i, j) * r2.at(i, j);
    }
  }
  return s;
}

}  // namespace fpr
