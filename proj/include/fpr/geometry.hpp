#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fpr/path.hpp"

namespace fpr {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 v);

/// Body-frame point mapped through a pose.
Vec2 transform(const Pose2& pose, Vec2 p);

/// Simple polygon with counter-clockwise vertex order.
///
/// Construction validates: at least three finite vertices, no
/// self-intersection, and shoelace area above 1e-12 m^2. Clockwise input is
/// reversed rather than rejected.
class Polygon {
 public:
  static Polygon make(std::vector<Vec2> vertices);
  /// Unit-less rectangle helper centered on the body origin.
  static Polygon rectangle(double length_x, double width_y);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  double area() const;
  double perimeter() const;
  bool is_convex() const;
  /// Largest vertex distance from the body origin.
  double bounding_radius() const;
  Vec2 centroid() const;

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  explicit Polygon(std::vector<Vec2> v) : vertices_(std::move(v)) {}
  std::vector<Vec2> vertices_;

  friend Polygon convex_hull(std::span<const Vec2> points);
  friend Polygon minkowski_sum(const Polygon& a, const Polygon& b);
  friend Polygon posed(const Polygon& poly, const Pose2& pose);
  friend Polygon reflect(const Polygon& poly);
  friend Polygon scaled_about_centroid(const Polygon& poly, double factor);
};

/// Shoelace area.
double polygon_area(const Polygon& poly);

Polygon posed(const Polygon& poly, const Pose2& pose);
/// Point reflection through the body origin: {-p : p in poly}.
Polygon reflect(const Polygon& poly);
Polygon scaled_about_centroid(const Polygon& poly, double factor);
Polygon convex_hull(std::span<const Vec2> points);
/// Minkowski sum of two convex polygons.
Polygon minkowski_sum(const Polygon& a, const Polygon& b);
/// Convex pieces whose union is the polygon (the polygon itself if convex,
/// otherwise an ear-clipping triangulation).
std::vector<Polygon> convex_pieces(const Polygon& poly);
/// Outward expansion by `radius` (Minkowski sum with a circumscribed
/// 16-gon). Requires a convex polygon when radius > 0.
Polygon inflate(const Polygon& poly, double radius);
/// Separating-axis overlap test for convex polygons (touching counts).
bool convex_intersect(const Polygon& a, const Polygon& b);
bool contains(const Polygon& poly, Vec2 p);

/// Half-open rectangle of cell indices [x0, x1) x [y0, y1).
struct CellBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 > x0 ? x1 - x0 : 0; }
  int height() const { return y1 > y0 ? y1 - y0 : 0; }
  bool empty() const { return width() == 0 || height() == 0; }
  CellBox padded(int cells) const {
    return {x0 - cells, y0 - cells, x1 + cells, y1 + cells};
  }
  CellBox intersect(const CellBox& o) const;
  CellBox unite(const CellBox& o) const;
  friend bool operator==(const CellBox&, const CellBox&) = default;
};

/// Uniform grid georeferencing. `origin` is the world position of the
/// center of cell (0, 0); cell (i, j) is centered at origin + (i, j) * res.
struct GridSpec {
  Vec2 origin;
  double resolution = 0.05;
  int width = 0;
  int height = 0;

  static GridSpec make(Vec2 origin, double resolution, int width, int height);

  double cell_area() const { return resolution * resolution; }
  std::size_t size() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  Vec2 center(int i, int j) const {
    return {origin.x + i * resolution, origin.y + j * resolution};
  }
  CellBox box() const { return {0, 0, width, height}; }
  /// Sub-grid sharing this lattice; `b` is in this grid's cell indices and
  /// may extend past its extent.
  GridSpec crop(const CellBox& b) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// True when both grids share resolution and lattice (origins differ by an
/// integer number of cells).
bool same_lattice(const GridSpec& a, const GridSpec& b);
/// Cell offset of `b`'s cell (0,0) in `a`'s indices. Throws on lattice
/// mismatch.
std::pair<int, int> lattice_offset(const GridSpec& a, const GridSpec& b);

/// Row-major grid of real samples.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& spec, double fill = 0.0);
  ScalarField(const GridSpec& spec, std::vector<double> samples);

  const GridSpec& spec() const { return spec_; }
  int width() const { return spec_.width; }
  int height() const { return spec_.height; }

  double& at(int i, int j) {
    return samples_[static_cast<std::size_t>(j) * spec_.width + i];
  }
  double at(int i, int j) const {
    return samples_[static_cast<std::size_t>(j) * spec_.width + i];
  }
  std::span<double> samples() { return samples_; }
  std::span<const double> samples() const { return samples_; }

  double sum() const;
  double max() const;
  bool all_finite() const;
  bool is_indicator() const;
  /// Bounding box of cells with |value| > 0, in this field's indices.
  CellBox support() const;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  GridSpec spec_;
  std::vector<double> samples_;
};

/// dst += weight * src over the overlap of two same-lattice fields.
void add_scaled(ScalarField& dst, const ScalarField& src, double weight);
/// Copy of `src` resampled onto `spec` (same lattice); cells outside `src`
/// are zero.
ScalarField embed(const ScalarField& src, const GridSpec& spec);

/// Indicator of the posed polygon: a cell is 1 iff its center lies inside
/// or on the boundary. A polygon outside the grid yields all zeros.
ScalarField rasterize_polygon(const Polygon& poly, const Pose2& pose,
                              const GridSpec& spec);

/// Indicator of the union of world-frame polygons.
ScalarField rasterize_union(std::span<const Polygon> world_polys, const GridSpec& spec);
/// Cell index box (in `spec` indices, possibly outside its extent) holding
/// every vertex of the polygons.
CellBox cell_bounds(std::span<const Polygon> world_polys, const GridSpec& spec);

/// Poses interpolated so that no footprint vertex moves more than
/// 0.5 * resolution between consecutive samples.
std::vector<Pose2> resample_poses(const Path& path, const Polygon& footprint,
                                  double resolution);

/// Swept area of a path: the rasterized union plus the poses it was built
/// from. `indicator` lives on a crop of `grid` around the path.
struct SweptArea {
  ScalarField indicator;
  GridSpec grid;
  std::vector<Pose2> poses;
  Polygon footprint = Polygon::rectangle(1.0, 1.0);
};

/// Swept area cropped to the path's bounding box padded by `pad_cells`.
SweptArea sweep(const Path& path, const Polygon& footprint,
                const GridSpec& grid, int pad_cells);
/// Swept indicator on the full grid.
ScalarField swept_indicator(const Path& path, const Polygon& footprint,
                            const GridSpec& spec);

/// Grid Minkowski sum of indicator fields. `ind_b` is a body-frame field:
/// its lattice must contain the world origin, which is the body origin.
/// Output lives on `ind_a`'s grid.
ScalarField minkowski_dilate(const ScalarField& ind_a, const ScalarField& ind_b);
/// Point reflection of a body-frame field through the origin.
ScalarField reflect(const ScalarField& body);
/// Lattice-aligned body-frame grid covering the polygon's bounds plus
/// `pad_cells` on every side.
GridSpec body_grid(const Polygon& poly, double resolution, int pad_cells);

}  // namespace fpr
