#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fpr {

struct BenchOptions {
  std::vector<int> k_list{10, 35, 100};
  std::vector<int> n_list{50};
  int repeats = 3;
  /// Independent scenes; timings are pooled over all of them.
  int scenes = 3;
  std::uint64_t seed = 0;
  double sigma_cells = 2.0;
  double resolution = 0.05;
  double std_dev = 0.3;
  bool exact = true;
};

struct BenchRow {
  int k = 0;
  int n = 0;
  std::string method;  // "fpr" or "exact"
  double precompute_ms = 0.0;
  double per_path_ms = 0.0;
};

/// Times the bound against the exact baseline. Each scene is a random one
/// holding max(k_list) cars (seeds seed, seed + 1, ...); each K uses its
/// first K cars, and every K sees the same paths and the same grid.
/// Sweeping is not timed. Every path is timed under each K in turn, so all
/// K share the same machine conditions. per_path_ms is the median over all
/// paths, scenes and repeats; precompute_ms the median over scenes and
/// repeats.
std::vector<BenchRow> run_bench(const BenchOptions& options);

/// CSV with header k,n,method,precompute_ms,per_path_ms.
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace fpr
