#include "fpr/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fpr/error.hpp"

namespace fpr {

namespace {

std::uint8_t channel(double v) {
  return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
}

Image blank(const GridSpec& grid) {
  Image img;
  img.width = grid.width;
  img.height = grid.height;
  img.rgb.assign(static_cast<std::size_t>(grid.width) * grid.height * 3, 0);
  return img;
}

}  // namespace

void Image::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  std::size_t n = (static_cast<std::size_t>(y) * width + x) * 3;
  rgb[n] = r;
  rgb[n + 1] = g;
  rgb[n + 2] = b;
}

Image heatmap(const ScalarField& f) {
  Image img = blank(f.spec());
  const double top = f.spec().size() > 0 ? f.max() : 0.0;
  if (!(top > 0.0)) return img;
  for (int j = 0; j < f.height(); ++j) {
    for (int i = 0; i < f.width(); ++i) {
      const double v = std::max(0.0, f.at(i, j)) / top;
      img.set(i, f.height() - 1 - j, channel(3.0 * v), channel(3.0 * v - 1.0),
              channel(3.0 * v - 2.0));
    }
  }
  return img;
}

Image risk_map(const Scenario& scenario, const GridSpec& grid, std::span<const Path> paths,
               const std::map<std::string, double>& risk, std::vector<std::string>* missing) {
  Image img = blank(grid);
  std::vector<Polygon> shapes;
  for (const Obstacle& o : scenario.obstacles) {
    shapes.push_back(posed(o.shape, Pose2(o.density.mean().x, o.density.mean().y, 0.0)));
  }
  const ScalarField occupied = rasterize_union(shapes, grid);
  for (int j = 0; j < grid.height; ++j) {
    for (int i = 0; i < grid.width; ++i) {
      if (occupied.at(i, j) != 0.0) img.set(i, grid.height - 1 - j, 90, 90, 90);
    }
  }
  for (const Path& p : paths) {
    std::uint8_t r = 128, g = 128, b = 128;
    auto it = risk.find(p.id);
    if (it == risk.end()) {
      if (missing != nullptr) missing->push_back(p.id);
    } else {
      const double lg = it->second > 0.0 ? std::log10(it->second) : -5.0;
      const double t = (std::clamp(lg, -5.0, 0.0) + 5.0) / 5.0;
      r = channel(t);
      g = 0;
      b = channel(1.0 - t);
    }
    if (p.poses.empty()) continue;
    // Centerline, densified to at most half a cell per step.
    Pose2 prev = p.poses.front().pose;
    for (const TimedPose& q : p.poses) {
      const double len = std::hypot(q.pose.x - prev.x, q.pose.y - prev.y);
      const int m = std::max(1, static_cast<int>(std::ceil(2.0 * len / grid.resolution)));
      for (int s = 0; s <= m; ++s) {
        const double u = static_cast<double>(s) / m;
        const double x = prev.x + u * (q.pose.x - prev.x), y = prev.y + u * (q.pose.y - prev.y);
        const int ci = static_cast<int>(std::lround((x - grid.origin.x) / grid.resolution));
        const int cj = static_cast<int>(std::lround((y - grid.origin.y) / grid.resolution));
        for (int dj = -1; dj <= 1; ++dj) {
          for (int di = -1; di <= 1; ++di) img.set(ci + di, grid.height - 1 - (cj + dj), r, g, b);
        }
      }
      prev = q.pose;
    }
  }
  return img;
}

std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
  return out;
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kInvalidInput, "cannot write '" + tmp.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::kInvalidInput, "cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::kInvalidInput, "cannot replace '" + path + "'");
  }
}

}  // namespace fpr
