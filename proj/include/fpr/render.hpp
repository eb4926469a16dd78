#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fpr/geometry.hpp"
#include "fpr/path.hpp"
#include "fpr/scenario.hpp"

namespace fpr {

/// 8-bit RGB raster, top row first.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

/// Field scaled by its maximum through a black-red-yellow-white ramp. Grid
/// row 0 (lowest y) becomes the bottom image row.
Image heatmap(const ScalarField& f);

/// Mean obstacle shapes in gray and path centerlines colored by
/// log10(f_d) clamped to [-5, 0], blue (safe) to red. Paths absent from
/// `risk` are drawn gray and their ids appended to `missing`.
Image risk_map(const Scenario& scenario, const GridSpec& grid, std::span<const Path> paths,
               const std::map<std::string, double>& risk, std::vector<std::string>* missing);

/// Binary PPM: header "P6\n<w> <h>\n255\n" followed by the pixels.
std::string encode_ppm(const Image& img);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::string& path, const std::string& bytes);

}  // namespace fpr
