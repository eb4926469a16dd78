#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpr/geometry.hpp"
#include "fpr/path.hpp"
#include "fpr/risk.hpp"

namespace fpr {

struct Scenario {
  /// Explicit grid, or nullopt for an automatic extent.
  std::optional<GridSpec> grid;
  /// Resolution requested for an automatic grid, if the file gave one.
  std::optional<double> resolution;
  Polygon robot = Polygon::rectangle(4.0, 2.0);
  std::vector<Obstacle> obstacles;
  Pose2 start;
  Pose2 goal;
  std::uint64_t seed = 0;
};

/// JSON scenario:
///   {"grid": "auto" | {"resolution": r[, "origin": [x, y], "width": w,
///    "height": h]}, "robot": {"vertices": [[x, y], ...]},
///    "obstacles": [{"id", "vertices", "mean": [x, y],
///    "cov": [[a, b], [b, c]], "inflation"?}], "start": [x, y, theta],
///    "goal": [x, y, theta], "seed": n}
/// Throws kParse naming the offending field.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& file);
std::string dump_scenario(const Scenario& s);

/// Grid covering every obstacle's mean shape, the start and goal, and the
/// footprint along every path, padded by 4 sigma cells plus three times the
/// largest positional std. The origin is a multiple of the resolution.
GridSpec auto_grid(const Scenario& s, std::span<const Path> paths, double resolution,
                   double sigma_cells);
/// The scenario's explicit grid if present, otherwise auto_grid.
GridSpec resolve_grid(const Scenario& s, std::span<const Path> paths, double resolution,
                      double sigma_cells);

enum class ScenarioTemplate { kCarpark, kRandom };

/// Synthetic scene with k car-sized (2 m x 4 m) obstacles and a 2 m x 4 m
/// robot.
///
/// carpark: perpendicular bays in rows of 12, 6 m aisles, cars in randomly
/// chosen bays; the robot drives the length of the middle aisle.
/// random: cars at random positions and headings, non-overlapping, clear of
/// start and goal; kPlacementFailed after 1000 rejected placements.
Scenario generate_scenario(ScenarioTemplate tmpl, int k, double std_dev, std::uint64_t seed);

}  // namespace fpr
