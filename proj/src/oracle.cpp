#include "fpr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <unordered_map>

#include "fpr/error.hpp"
#include "fpr/rng.hpp"

namespace fpr {

namespace {

constexpr std::size_t kChunk = 4096;
constexpr double kBucket = 1.0;  // meters

std::uint64_t stream_seed(std::uint64_t seed, std::size_t obstacle, std::size_t chunk) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ (0xA0761D6478BD642FULL * (obstacle + 1)));
  return splitmix64(s ^ (0xE7037ED1A0B428DBULL * (chunk + 1)));
}

struct Box {
  Vec2 lo;
  Vec2 hi;
};

Box bounds(const std::vector<Vec2>& v) {
  Box b{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
        {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  for (Vec2 p : v) {
    b.lo = {std::min(b.lo.x, p.x), std::min(b.lo.y, p.y)};
    b.hi = {std::max(b.hi.x, p.x), std::max(b.hi.y, p.y)};
  }
  return b;
}

// Convex polygons bucketed on a coarse grid for overlap queries.
class SweptIndex {
 public:
  explicit SweptIndex(std::span<const Polygon> polys) : polys_(polys.begin(), polys.end()) {
    stamp_.assign(polys_.size(), 0);
    for (std::size_t n = 0; n < polys_.size(); ++n) {
      if (!polys_[n].is_convex()) {
        throw Error(ErrorKind::kUnsupportedShape, "swept polygons must be convex");
      }
      Box b = bounds(polys_[n].vertices());
      boxes_.push_back(b);
      for (long j = cell(b.lo.y); j <= cell(b.hi.y); ++j) {
        for (long i = cell(b.lo.x); i <= cell(b.hi.x); ++i) buckets_[key(i, j)].push_back(n);
      }
    }
  }

  // True when `shape` translated by r meets any polygon.
  bool hits(const Polygon& shape, const Box& shape_box, Vec2 r) {
    const Box q{shape_box.lo + r, shape_box.hi + r};
    ++tick_;
    for (long j = cell(q.lo.y); j <= cell(q.hi.y); ++j) {
      for (long i = cell(q.lo.x); i <= cell(q.hi.x); ++i) {
        auto it = buckets_.find(key(i, j));
        if (it == buckets_.end()) continue;
        for (std::size_t n : it->second) {
          if (stamp_[n] == tick_) continue;
          stamp_[n] = tick_;
          const Box& b = boxes_[n];
          if (b.hi.x < q.lo.x || q.hi.x < b.lo.x || b.hi.y < q.lo.y || q.hi.y < b.lo.y) continue;
          if (overlap(polys_[n], shape, r)) return true;
        }
      }
    }
    return false;
  }

 private:
  static long cell(double v) { return static_cast<long>(std::floor(v / kBucket)); }
  static std::int64_t key(long i, long j) {
    return (static_cast<std::int64_t>(i) << 32) ^ static_cast<std::uint32_t>(j);
  }

  // Separating-axis test of a and (b + r), touching counts as overlap.
  static bool overlap(const Polygon& a, const Polygon& b, Vec2 r) {
    auto separated = [](const std::vector<Vec2>& p, Vec2 pr, const std::vector<Vec2>& q,
                        Vec2 qr) {
      for (std::size_t i = 0, n = p.size(); i < n; ++i) {
        Vec2 e = p[(i + 1) % n] - p[i];
        Vec2 axis{e.y, -e.x};
        double pmax = -std::numeric_limits<double>::infinity();
        for (Vec2 v : p) pmax = std::max(pmax, dot(axis, v + pr));
        double qmin = std::numeric_limits<double>::infinity();
        for (Vec2 v : q) qmin = std::min(qmin, dot(axis, v + qr));
        if (qmin > pmax) return true;
      }
      return false;
    };
    const Vec2 zero{};
    return !separated(a.vertices(), zero, b.vertices(), r) &&
           !separated(b.vertices(), r, a.vertices(), zero);
  }

  std::vector<Polygon> polys_;
  std::vector<Box> boxes_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t tick_ = 0;
};

class LocationSampler {
 public:
  explicit LocationSampler(const LocationDensity& p) : p_(p) {
    if (p.kind() == LocationDensity::Kind::kGridded) {
      double s = 0.0;
      for (double v : p.grid().samples()) {
        s += v;
        cdf_.push_back(s);
      }
      for (double& v : cdf_) v /= s;
    } else {
      const Mat2& c = p.cov();
      if (c.xx > 0.0) {
        l11_ = std::sqrt(c.xx);
        l21_ = c.xy / l11_;
        l22_ = std::sqrt(std::max(0.0, c.yy - l21_ * l21_));
      }
    }
  }

  Vec2 draw(std::mt19937_64& eng) const {
    if (!cdf_.empty()) {
      const double u = uniform01(eng);
      std::size_t n = static_cast<std::size_t>(
          std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
      n = std::min(n, cdf_.size() - 1);
      const int w = p_.grid().width();
      return p_.grid().spec().center(static_cast<int>(n % w), static_cast<int>(n / w));
    }
    const double u1 = uniform01(eng), u2 = uniform01(eng);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double z1 = rad * std::cos(2.0 * std::numbers::pi * u2);
    const double z2 = rad * std::sin(2.0 * std::numbers::pi * u2);
    const Vec2 m = p_.mean();
    return {m.x + l11_ * z1, m.y + l21_ * z1 + l22_ * z2};
  }

 private:
  const LocationDensity& p_;
  std::vector<double> cdf_;
  double l11_ = 0.0, l21_ = 0.0, l22_ = 0.0;
};

McEstimate estimate(std::span<const Polygon> swept_polys, std::span<const Obstacle> obstacles,
                    std::size_t n, std::uint64_t seed) {
  if (n < 1000) {
    throw Error(ErrorKind::kInvalidInput, "Monte-Carlo needs at least 1000 samples");
  }
  std::vector<Polygon> shapes;
  std::vector<Box> shape_boxes;
  std::vector<LocationSampler> samplers;
  shapes.reserve(obstacles.size());
  samplers.reserve(obstacles.size());
  for (const Obstacle& o : obstacles) {
    Polygon s = o.effective_shape();
    if (!s.is_convex()) {
      throw Error(ErrorKind::kUnsupportedShape,
                  "Monte-Carlo oracle requires a convex obstacle ('" + o.id + "')");
    }
    shape_boxes.push_back(bounds(s.vertices()));
    shapes.push_back(std::move(s));
    samplers.emplace_back(o.density);
  }
  SweptIndex index(swept_polys);

  std::size_t hits = 0;
  std::vector<Vec2> locs(kChunk * obstacles.size());
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t m = std::min(kChunk, n - c * kChunk);
    for (std::size_t k = 0; k < obstacles.size(); ++k) {
      std::mt19937_64 eng(stream_seed(seed, k, c));
      for (std::size_t s = 0; s < m; ++s) locs[k * kChunk + s] = samplers[k].draw(eng);
    }
    for (std::size_t s = 0; s < m; ++s) {
      for (std::size_t k = 0; k < obstacles.size(); ++k) {
        if (index.hits(shapes[k], shape_boxes[k], locs[k * kChunk + s])) {
          ++hits;
          break;
        }
      }
    }
  }
  McEstimate e;
  e.n_samples = n;
  e.seed = seed;
  e.p_hat = static_cast<double>(hits) / static_cast<double>(n);
  e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(n));
  return e;
}

}  // namespace

std::vector<Polygon> posed_footprints(std::span<const Pose2> poses, const Polygon& footprint) {
  const std::vector<Polygon> pieces = convex_pieces(footprint);
  std::vector<Polygon> out;
  out.reserve(poses.size() * pieces.size());
  for (const Pose2& p : poses) {
    for (const Polygon& piece : pieces) out.push_back(posed(piece, p));
  }
  return out;
}

McEstimate mc_single(std::span<const Polygon> swept_polys, const Obstacle& obs, std::size_t n,
                     std::uint64_t seed) {
  return estimate(swept_polys, std::span<const Obstacle>(&obs, 1), n, seed);
}

McEstimate mc_total(std::span<const Polygon> swept_polys, std::span<const Obstacle> obstacles,
                    std::size_t n, std::uint64_t seed) {
  return estimate(swept_polys, obstacles, n, seed);
}

}  // namespace fpr
