#pragma once

#include <cstdint>
#include <vector>

#include "rsfw/graph.hpp"

namespace rsfw {

/// Serial is the reference path; Parallel must produce identical results.
enum class Execution { Serial, Parallel };

/// Root counts |rho| of `samples` independent forests. Sample i uses
/// derive_seed(seed, i), so the output does not depend on the thread count.
std::vector<Index> sample_root_counts(const WeightedGraph& g, double q, Index samples,
                                      std::uint64_t seed, Execution exec = Execution::Parallel);

struct RootInclusionCounts {
  Index samples = 0;
  std::vector<Index> count_histogram;  // index k: number of forests with k roots
  Vector singles;                      // times x was a root
  Matrix pairs;                        // times x and y were both roots (x != y)
  std::uint64_t walk_steps = 0;
};

RootInclusionCounts sample_root_inclusions(const WeightedGraph& g, double q, Index samples,
                                           std::uint64_t seed,
                                           Execution exec = Execution::Parallel);

struct SampleMoments {
  double mean = 0.0;
  double standard_error = 0.0;
  Index samples = 0;
};

/// Continuous-time hitting time of the root set of an independent forest,
/// started at `start`.
SampleMoments sample_forest_hitting_time(const WeightedGraph& g, double q, Index start,
                                         Index samples, std::uint64_t seed,
                                         Execution exec = Execution::Parallel);

/// Continuous-time hitting time of `target` (a 0/1 mask) from `start`.
SampleMoments sample_hitting_time(const WeightedGraph& g, const std::vector<char>& target,
                                  Index start, Index samples, std::uint64_t seed,
                                  Execution exec = Execution::Parallel);

/// Empirical law of X(H+_target) for the chain P = Id + L/alpha started at
/// `start`, where H+ is counted from the first Poisson event. Entry y is the
/// fraction of walks that first returned at y.
Vector sample_trace_exit(const WeightedGraph& g, const std::vector<char>& target, Index start,
                         Index samples, std::uint64_t seed, Execution exec = Execution::Parallel);

/// Solves S X = B column by column with a sparse Cholesky factor of the
/// symmetric positive definite S.
Matrix solve_spd_columns(const SparseMatrix& s, const Matrix& rhs,
                         Execution exec = Execution::Parallel);

/// Row sums of |A|.
Vector row_abs_sums(const Matrix& a, Execution exec = Execution::Parallel);

}  // namespace rsfw
