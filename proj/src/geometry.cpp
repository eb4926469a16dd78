#include "fpr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fpr/error.hpp"

namespace fpr {

namespace {

constexpr double kMinArea = 1e-12;
// Grid-unit tolerance for the cell-center rule.
constexpr double kSnap = 1e-9;

double signed_area(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    s += cross(v[i], v[(i + 1) % n]);
  }
  return 0.5 * s;
}

int orient(Vec2 a, Vec2 b, Vec2 c) {
  double v = cross(b - a, c - a);
  return (v > 0) - (v < 0);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool is_simple(const std::vector<Vec2>& v) {
  std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a = v[i], b = v[(i + 1) % n];
    // Adjacent edge folding back onto this one.
    Vec2 c = v[(i + 2) % n];
    if (orient(a, b, c) == 0 && dot(b - a, c - b) < 0) return false;
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(a, b, v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

double snap(double v) {
  double r = std::round(v);
  return std::abs(v - r) < kSnap ? r : v;
}

std::vector<Vec2> hull_points(std::vector<Vec2> p) {
  std::sort(p.begin(), p.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  std::vector<Vec2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

// Per-row coverage counts built from closed cell intervals.
class SpanCanvas {
 public:
  explicit SpanCanvas(const GridSpec& spec)
      : spec_(spec),
        diff_(static_cast<std::size_t>(spec.width + 1) * spec.height, 0) {}

  void add_polygon(const std::vector<Vec2>& world) {
    const double h = spec_.resolution;
    local_.resize(world.size());
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -vmin;
    for (std::size_t k = 0; k < world.size(); ++k) {
      local_[k] = {snap((world[k].x - spec_.origin.x) / h),
                   snap((world[k].y - spec_.origin.y) / h)};
      vmin = std::min(vmin, local_[k].y);
      vmax = std::max(vmax, local_[k].y);
    }
    int j0 = std::max(0, static_cast<int>(std::ceil(vmin)));
    int j1 = std::min(spec_.height - 1, static_cast<int>(std::floor(vmax)));
    for (int j = j0; j <= j1; ++j) add_row(j);
  }

  ScalarField finish() const {
    ScalarField out(spec_);
    const int w = spec_.width;
    for (int j = 0; j < spec_.height; ++j) {
      const int* row = &diff_[static_cast<std::size_t>(j) * (w + 1)];
      int acc = 0;
      for (int i = 0; i < w; ++i) {
        acc += row[i];
        if (acc > 0) out.at(i, j) = 1.0;
      }
    }
    return out;
  }

 private:
  void add_row(int j) {
    const double y = j;
    const std::size_t n = local_.size();
    xs_.clear();
    extra_.clear();
    for (std::size_t k = 0; k < n; ++k) {
      Vec2 a = local_[k], b = local_[(k + 1) % n];
      if (a.y == y) extra_.push_back({a.x, a.x});
      if (a.y == b.y) {
        if (a.y == y) extra_.push_back({std::min(a.x, b.x), std::max(a.x, b.x)});
        continue;
      }
      double lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
      if (y < lo || y >= hi) continue;
      xs_.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs_.begin(), xs_.end());
    for (std::size_t k = 0; k + 1 < xs_.size(); k += 2) mark(j, xs_[k], xs_[k + 1]);
    for (const Vec2& e : extra_) mark(j, e.x, e.y);
  }

  void mark(int j, double x0, double x1) {
    int i0 = static_cast<int>(std::ceil(x0 - kSnap));
    int i1 = static_cast<int>(std::floor(x1 + kSnap));
    i0 = std::max(i0, 0);
    i1 = std::min(i1, spec_.width - 1);
    if (i0 > i1) return;
    int* row = &diff_[static_cast<std::size_t>(j) * (spec_.width + 1)];
    ++row[i0];
    --row[i1 + 1];
  }

  GridSpec spec_;
  std::vector<int> diff_;
  std::vector<Vec2> local_;
  std::vector<double> xs_;
  std::vector<Vec2> extra_;  // closed intervals stored as (x0, x1)
};

std::vector<Vec2> posed_vertices(const Polygon& poly, const Pose2& pose) {
  std::vector<Vec2> out;
  out.reserve(poly.size());
  for (Vec2 v : poly.vertices()) out.push_back(transform(pose, v));
  return out;
}

}  // namespace

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

Vec2 transform(const Pose2& pose, Vec2 p) {
  double c = std::cos(pose.theta), s = std::sin(pose.theta);
  return {pose.x + c * p.x - s * p.y, pose.y + s * p.x + c * p.y};
}

Polygon Polygon::make(std::vector<Vec2> v) {
  for (Vec2 p : v) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorKind::kInvalidShape, "polygon vertex is not finite");
    }
  }
  std::vector<Vec2> d;
  d.reserve(v.size());
  for (Vec2 p : v) {
    if (d.empty() || !(d.back() == p)) d.push_back(p);
  }
  while (d.size() > 1 && d.front() == d.back()) d.pop_back();
  if (d.size() < 3) {
    throw Error(ErrorKind::kInvalidShape, "polygon needs at least 3 distinct vertices");
  }
  double a = signed_area(d);
  if (std::abs(a) < kMinArea) {
    throw Error(ErrorKind::kInvalidShape, "degenerate polygon (zero area)");
  }
  if (!is_simple(d)) {
    throw Error(ErrorKind::kInvalidShape, "polygon is self-intersecting");
  }
  if (a < 0) std::reverse(d.begin(), d.end());
  return Polygon(std::move(d));
}

Polygon Polygon::rectangle(double length_x, double width_y) {
  double hx = 0.5 * length_x, hy = 0.5 * width_y;
  return make({{-hx, -hy}, {hx, -hy}, {hx, hy}, {-hx, hy}});
}

double Polygon::area() const { return signed_area(vertices_); }

double Polygon::perimeter() const {
  double s = 0.0;
  for (std::size_t i = 0, n = size(); i < n; ++i) {
    s += norm(vertices_[(i + 1) % n] - vertices_[i]);
  }
  return s;
}

bool Polygon::is_convex() const {
  for (std::size_t i = 0, n = size(); i < n; ++i) {
    Vec2 a = vertices_[i], b = vertices_[(i + 1) % n], c = vertices_[(i + 2) % n];
    if (cross(b - a, c - b) < -1e-12) return false;
  }
  return true;
}

double Polygon::bounding_radius() const {
  double r = 0.0;
  for (Vec2 v : vertices_) r = std::max(r, norm(v));
  return r;
}

Vec2 Polygon::centroid() const {
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0, n = size(); i < n; ++i) {
    Vec2 a = vertices_[i], b = vertices_[(i + 1) % n];
    double c = cross(a, b);
    cx += (a.x + b.x) * c;
    cy += (a.y + b.y) * c;
  }
  double a6 = 6.0 * area();
  return {cx / a6, cy / a6};
}

double polygon_area(const Polygon& poly) { return poly.area(); }

Polygon posed(const Polygon& poly, const Pose2& pose) {
  return Polygon(posed_vertices(poly, pose));
}

Polygon reflect(const Polygon& poly) {
  std::vector<Vec2> v;
  v.reserve(poly.size());
  for (Vec2 p : poly.vertices()) v.push_back(-p);
  return Polygon(std::move(v));
}

Polygon scaled_about_centroid(const Polygon& poly, double factor) {
  Vec2 c = poly.centroid();
  std::vector<Vec2> v;
  v.reserve(poly.size());
  for (Vec2 p : poly.vertices()) v.push_back(c + factor * (p - c));
  return Polygon(std::move(v));
}

Polygon convex_hull(std::span<const Vec2> points) {
  std::vector<Vec2> h = hull_points({points.begin(), points.end()});
  if (h.size() < 3 || std::abs(signed_area(h)) < kMinArea) {
    throw Error(ErrorKind::kInvalidShape, "convex hull is degenerate");
  }
  return Polygon(std::move(h));
}

Polygon minkowski_sum(const Polygon& a, const Polygon& b) {
  std::vector<Vec2> sums;
  sums.reserve(a.size() * b.size());
  for (Vec2 p : a.vertices()) {
    for (Vec2 q : b.vertices()) sums.push_back(p + q);
  }
  return convex_hull(sums);
}

std::vector<Polygon> convex_pieces(const Polygon& poly) {
  if (poly.is_convex()) return {poly};
  std::vector<Vec2> v = poly.vertices();
  std::vector<Polygon> out;
  auto is_ear = [&](std::size_t i) {
    std::size_t n = v.size();
    Vec2 a = v[(i + n - 1) % n], b = v[i], c = v[(i + 1) % n];
    if (cross(b - a, c - b) <= 0) return false;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == (i + 1) % n || k == (i + n - 1) % n) continue;
      Vec2 p = v[k];
      if (orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0) {
        return false;
      }
    }
    return true;
  };
  while (v.size() > 3) {
    std::size_t n = v.size();
    std::size_t ear = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_ear(i)) {
        ear = i;
        break;
      }
    }
    if (ear == n) throw Error(ErrorKind::kNumerical, "ear clipping failed");
    Vec2 a = v[(ear + n - 1) % n], b = v[ear], c = v[(ear + 1) % n];
    if (std::abs(cross(b - a, c - a)) > 2 * kMinArea) out.push_back(Polygon::make({a, b, c}));
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(ear));
  }
  if (std::abs(signed_area(v)) > kMinArea) out.push_back(Polygon::make(v));
  return out;
}

Polygon inflate(const Polygon& poly, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::kInvalidInput, "inflation radius must be finite and >= 0");
  }
  if (radius == 0.0) return poly;
  if (!poly.is_convex()) {
    throw Error(ErrorKind::kUnsupportedShape, "inflation requires a convex shape");
  }
  constexpr int kSides = 16;
  const double r = radius / std::cos(std::numbers::pi / kSides);
  std::vector<Vec2> disc;
  for (int k = 0; k < kSides; ++k) {
    double a = 2.0 * std::numbers::pi * (k + 0.5) / kSides;
    disc.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return minkowski_sum(poly, convex_hull(disc));
}

bool convex_intersect(const Polygon& a, const Polygon& b) {
  auto separated_along_edges = [](const Polygon& p, const Polygon& q) {
    const auto& pv = p.vertices();
    for (std::size_t i = 0, n = pv.size(); i < n; ++i) {
      Vec2 e = pv[(i + 1) % n] - pv[i];
      Vec2 axis{e.y, -e.x};  // outward normal for CCW order
      double pmax = -std::numeric_limits<double>::infinity();
      for (Vec2 v : pv) pmax = std::max(pmax, dot(axis, v));
      double qmin = std::numeric_limits<double>::infinity();
      for (Vec2 v : q.vertices()) qmin = std::min(qmin, dot(axis, v));
      if (qmin > pmax) return true;
    }
    return false;
  };
  return !separated_along_edges(a, b) && !separated_along_edges(b, a);
}

bool contains(const Polygon& poly, Vec2 p) {
  const auto& v = poly.vertices();
  bool inside = false;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    Vec2 a = v[i], b = v[(i + 1) % n];
    if (orient(a, b, p) == 0 && on_segment(a, b, p)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

CellBox CellBox::intersect(const CellBox& o) const {
  return {std::max(x0, o.x0), std::max(y0, o.y0), std::min(x1, o.x1),
          std::min(y1, o.y1)};
}

CellBox CellBox::unite(const CellBox& o) const {
  if (empty()) return o;
  if (o.empty()) return *this;
  return {std::min(x0, o.x0), std::min(y0, o.y0), std::max(x1, o.x1),
          std::max(y1, o.y1)};
}

GridSpec GridSpec::make(Vec2 origin, double resolution, int width, int height) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw Error(ErrorKind::kInvalidInput, "grid resolution must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::kInvalidInput, "grid width and height must be positive");
  }
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y)) {
    throw Error(ErrorKind::kInvalidInput, "grid origin must be finite");
  }
  return {origin, resolution, width, height};
}

GridSpec GridSpec::crop(const CellBox& b) const {
  return {center(b.x0, b.y0), resolution, b.width(), b.height()};
}

bool same_lattice(const GridSpec& a, const GridSpec& b) {
  if (std::abs(a.resolution - b.resolution) > 1e-12 * a.resolution) return false;
  double dx = (b.origin.x - a.origin.x) / a.resolution;
  double dy = (b.origin.y - a.origin.y) / a.resolution;
  return std::abs(dx - std::round(dx)) < 1e-6 && std::abs(dy - std::round(dy)) < 1e-6;
}

std::pair<int, int> lattice_offset(const GridSpec& a, const GridSpec& b) {
  if (!same_lattice(a, b)) {
    throw Error(ErrorKind::kInvalidInput, "grids do not share a lattice");
  }
  return {static_cast<int>(std::lround((b.origin.x - a.origin.x) / a.resolution)),
          static_cast<int>(std::lround((b.origin.y - a.origin.y) / a.resolution))};
}

ScalarField::ScalarField(const GridSpec& spec, double fill)
    : spec_(spec), samples_(spec.size(), fill) {}

ScalarField::ScalarField(const GridSpec& spec, std::vector<double> samples)
    : spec_(spec), samples_(std::move(samples)) {
  if (samples_.size() != spec_.size()) {
    throw Error(ErrorKind::kInvalidInput, "sample count does not match grid size");
  }
}

double ScalarField::sum() const {
  double s = 0.0;
  for (double v : samples_) s += v;
  return s;
}

double ScalarField::max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : samples_) m = std::max(m, v);
  return m;
}

bool ScalarField::all_finite() const {
  return std::all_of(samples_.begin(), samples_.end(),
                     [](double v) { return std::isfinite(v); });
}

bool ScalarField::is_indicator() const {
  return std::all_of(samples_.begin(), samples_.end(),
                     [](double v) { return v == 0.0 || v == 1.0; });
}

CellBox ScalarField::support() const {
  CellBox b{width(), height(), 0, 0};
  for (int j = 0; j < height(); ++j) {
    for (int i = 0; i < width(); ++i) {
      if (at(i, j) != 0.0) {
        b.x0 = std::min(b.x0, i);
        b.x1 = std::max(b.x1, i + 1);
        b.y0 = std::min(b.y0, j);
        b.y1 = std::max(b.y1, j + 1);
      }
    }
  }
  if (b.x1 <= b.x0) return {};
  return b;
}

void add_scaled(ScalarField& dst, const ScalarField& src, double weight) {
  auto [ox, oy] = lattice_offset(dst.spec(), src.spec());
  CellBox box = dst.spec().box().intersect(
      CellBox{ox, oy, ox + src.width(), oy + src.height()});
  for (int j = box.y0; j < box.y1; ++j) {
    for (int i = box.x0; i < box.x1; ++i) {
      dst.at(i, j) += weight * src.at(i - ox, j - oy);
    }
  }
}

ScalarField embed(const ScalarField& src, const GridSpec& spec) {
  ScalarField out(spec);
  add_scaled(out, src, 1.0);
  return out;
}

ScalarField rasterize_polygon(const Polygon& poly, const Pose2& pose,
                              const GridSpec& spec) {
  if (poly.area() < kMinArea) {
    throw Error(ErrorKind::kInvalidShape, "degenerate polygon (zero area)");
  }
  SpanCanvas canvas(spec);
  canvas.add_polygon(posed_vertices(poly, pose));
  return canvas.finish();
}

ScalarField rasterize_union(std::span<const Polygon> world_polys, const GridSpec& spec) {
  SpanCanvas canvas(spec);
  for (const Polygon& p : world_polys) canvas.add_polygon(p.vertices());
  return canvas.finish();
}

CellBox cell_bounds(std::span<const Polygon> world_polys, const GridSpec& spec) {
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (const Polygon& p : world_polys) {
    for (Vec2 w : p.vertices()) {
      xmin = std::min(xmin, w.x);
      xmax = std::max(xmax, w.x);
      ymin = std::min(ymin, w.y);
      ymax = std::max(ymax, w.y);
    }
  }
  if (xmin > xmax) return {};
  const double h = spec.resolution;
  return {static_cast<int>(std::floor((xmin - spec.origin.x) / h)),
          static_cast<int>(std::floor((ymin - spec.origin.y) / h)),
          static_cast<int>(std::ceil((xmax - spec.origin.x) / h)) + 1,
          static_cast<int>(std::ceil((ymax - spec.origin.y) / h)) + 1};
}

std::vector<Pose2> resample_poses(const Path& path, const Polygon& footprint,
                                  double resolution) {
  if (path.poses.empty()) {
    throw Error(ErrorKind::kInvalidInput, "path '" + path.id + "' has no poses");
  }
  const double reach = footprint.bounding_radius();
  const double limit = 0.5 * resolution;
  std::vector<Pose2> out{path.poses.front().pose};
  for (std::size_t k = 1; k < path.poses.size(); ++k) {
    const Pose2& a = path.poses[k - 1].pose;
    const Pose2& b = path.poses[k].pose;
    double dth = normalize_angle(b.theta - a.theta);
    double travel = std::hypot(b.x - a.x, b.y - a.y) + std::abs(dth) * reach;
    int m = std::max(1, static_cast<int>(std::ceil(travel / limit)));
    for (int s = 1; s <= m; ++s) {
      double u = static_cast<double>(s) / m;
      out.emplace_back(a.x + u * (b.x - a.x), a.y + u * (b.y - a.y),
                       a.theta + u * dth);
    }
  }
  return out;
}

SweptArea sweep(const Path& path, const Polygon& footprint, const GridSpec& grid,
                int pad_cells) {
  SweptArea s;
  s.grid = grid;
  s.footprint = footprint;
  s.poses = resample_poses(path, footprint, grid.resolution);
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (const Pose2& p : s.poses) {
    for (Vec2 v : footprint.vertices()) {
      Vec2 w = transform(p, v);
      xmin = std::min(xmin, w.x);
      xmax = std::max(xmax, w.x);
      ymin = std::min(ymin, w.y);
      ymax = std::max(ymax, w.y);
    }
  }
  const double h = grid.resolution;
  CellBox box{static_cast<int>(std::floor((xmin - grid.origin.x) / h)),
              static_cast<int>(std::floor((ymin - grid.origin.y) / h)),
              static_cast<int>(std::ceil((xmax - grid.origin.x) / h)) + 1,
              static_cast<int>(std::ceil((ymax - grid.origin.y) / h)) + 1};
  SpanCanvas canvas(grid.crop(box.padded(pad_cells)));
  for (const Pose2& p : s.poses) canvas.add_polygon(posed_vertices(footprint, p));
  s.indicator = canvas.finish();
  return s;
}

ScalarField swept_indicator(const Path& path, const Polygon& footprint,
                            const GridSpec& spec) {
  SpanCanvas canvas(spec);
  for (const Pose2& p : resample_poses(path, footprint, spec.resolution)) {
    canvas.add_polygon(posed_vertices(footprint, p));
  }
  return canvas.finish();
}

ScalarField minkowski_dilate(const ScalarField& ind_a, const ScalarField& ind_b) {
  if (!ind_a.is_indicator() || !ind_b.is_indicator()) {
    throw Error(ErrorKind::kInvalidInput, "minkowski_dilate expects indicator fields");
  }
  const GridSpec& bs = ind_b.spec();
  GridSpec body_lattice{{0.0, 0.0}, ind_a.spec().resolution, 1, 1};
  if (!same_lattice(body_lattice, bs) ||
      std::abs(bs.resolution - ind_a.spec().resolution) > 1e-12 * bs.resolution) {
    throw Error(ErrorKind::kInvalidInput,
                "body field must lie on a lattice through the origin");
  }
  auto [bx, by] = lattice_offset(body_lattice, bs);
  const int w = ind_a.width(), h = ind_a.height();
  ScalarField out(ind_a.spec());

  // prefix[j][i] = number of ones in row j of A left of column i.
  std::vector<int> prefix(static_cast<std::size_t>(w + 1) * h, 0);
  for (int j = 0; j < h; ++j) {
    int* p = &prefix[static_cast<std::size_t>(j) * (w + 1)];
    for (int i = 0; i < w; ++i) p[i + 1] = p[i] + (ind_a.at(i, j) != 0.0);
  }
  auto count = [&](int j, int lo, int hi) {
    lo = std::max(lo, 0);
    hi = std::min(hi, w - 1);
    if (lo > hi) return 0;
    const int* p = &prefix[static_cast<std::size_t>(j) * (w + 1)];
    return p[hi + 1] - p[lo];
  };

  for (int bj = 0; bj < ind_b.height(); ++bj) {
    const int dy = by + bj;
    for (int bi = 0; bi < ind_b.width();) {
      if (ind_b.at(bi, bj) == 0.0) {
        ++bi;
        continue;
      }
      int end = bi;
      while (end + 1 < ind_b.width() && ind_b.at(end + 1, bj) != 0.0) ++end;
      const int ds = bx + bi, de = bx + end;
      for (int j = std::max(0, dy); j < std::min(h, h + dy); ++j) {
        const int src = j - dy;
        if (count(src, 0, w - 1) == 0) continue;
        for (int i = 0; i < w; ++i) {
          if (out.at(i, j) == 0.0 && count(src, i - de, i - ds) > 0) out.at(i, j) = 1.0;
        }
      }
      bi = end + 1;
    }
  }
  return out;
}

ScalarField reflect(const ScalarField& body) {
  const GridSpec& s = body.spec();
  GridSpec r{{-(s.origin.x + (s.width - 1) * s.resolution),
              -(s.origin.y + (s.height - 1) * s.resolution)},
             s.resolution, s.width, s.height};
  ScalarField out(r);
  for (int j = 0; j < s.height; ++j) {
    for (int i = 0; i < s.width; ++i) {
      out.at(i, j) = body.at(s.width - 1 - i, s.height - 1 - j);
    }
  }
  return out;
}

GridSpec body_grid(const Polygon& poly, double resolution, int pad_cells) {
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (Vec2 v : poly.vertices()) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  int i0 = static_cast<int>(std::floor(xmin / resolution)) - pad_cells;
  int j0 = static_cast<int>(std::floor(ymin / resolution)) - pad_cells;
  int i1 = static_cast<int>(std::ceil(xmax / resolution)) + pad_cells;
  int j1 = static_cast<int>(std::ceil(ymax / resolution)) + pad_cells;
  return GridSpec::make({i0 * resolution, j0 * resolution}, resolution, i1 - i0 + 1,
                        j1 - j0 + 1);
}

}  // namespace fpr
