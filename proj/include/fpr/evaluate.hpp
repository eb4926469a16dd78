#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpr/error.hpp"
#include "fpr/oracle.hpp"
#include "fpr/risk.hpp"
#include "fpr/scenario.hpp"

namespace fpr {

struct EvalOptions {
  double sigma_cells = 2.0;
  /// Used only when the scenario does not fix its own grid.
  double resolution = 0.05;
  bool exact = false;
  bool mc = false;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
};

struct RiskReport {
  std::string path_id;
  /// Expected-collision bound; may exceed 1.
  double f_d = 0.0;
  std::optional<double> p_d_exact;
  std::optional<double> p_d_bar;
  std::optional<McEstimate> mc;
  /// Time spent in the bound itself, excluding the sweep.
  double eval_ms = 0.0;
  double exact_ms = 0.0;
  /// Non-empty when this path failed; the other fields are then unset.
  std::string error;
  ErrorKind error_kind = ErrorKind::kInvalidInput;

  double f_d_clamped() const { return f_d < 1.0 ? f_d : 1.0; }
  bool ok() const { return error.empty(); }
};

struct Evaluation {
  GridSpec grid;
  RiskFields fields;
  /// Sum of point-obstacle densities (all zero when there are none).
  ScalarField point_g;
  double precompute_ms = 0.0;
  std::vector<RiskReport> reports;
  std::vector<std::string> warnings;
};

/// Precomputes the shared fields once, then bounds every path. Obstacles
/// smaller than a cell go through the point bound. Failures are reported
/// per path and do not stop the batch.
Evaluation evaluate_paths(const Scenario& scenario, std::span<const Path> paths,
                          const EvalOptions& options);

/// Per-obstacle exact probabilities for one swept area (finite obstacles by
/// the Minkowski route, point obstacles by their mass over the area).
std::vector<double> exact_per_obstacle(const SweptArea& swept,
                                       std::span<const Obstacle> obstacles);

}  // namespace fpr
