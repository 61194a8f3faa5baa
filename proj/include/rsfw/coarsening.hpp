#pragma once

#include <vector>

#include "rsfw/graph.hpp"

namespace rsfw {

struct SchurOptions {
  Index dense_threshold = 2048;  // |dropped| above this uses the Neumann series
  double neumann_tol = 1e-14;
  Index neumann_max_terms = 1000000;
};

/// Downsampled level: the Schur complement of the dropped block together
/// with the constants controlling the reconstruction operators.
struct CoarseLevel {
  std::vector<Index> kept;     // increasing fine-graph indices
  std::vector<Index> dropped;  // increasing fine-graph indices
  Matrix generator;            // Lbar on kept, after sparsification if applied
  Matrix generator_full;       // exact Schur complement
  Vector mu_bar;               // mu conditioned on kept
  double alpha_bar = 0.0;      // max exit rate of `generator`
  double alpha_bar_full = 0.0; // max exit rate of `generator_full`
  double alpha_fine = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  Matrix green_dropped;        // (-L_DD)^{-1}
  Matrix hitting;              // (-L_DD)^{-1} L_DK, the hitting distribution on kept
  Matrix exit_weights;         // L_KD (-L_DD)^{-1}
  Vector hitting_times;        // E_x[H_kept] for x dropped
  bool sparsified = false;
  bool connected = true;

  Index kept_size() const noexcept { return static_cast<Index>(kept.size()); }
  Index dropped_size() const noexcept { return static_cast<Index>(dropped.size()); }
};

CoarseLevel schur_complement(const WeightedGraph& g, std::vector<Index> kept, const SchurOptions& options = {});

/// (1/alpha) sum_k P_DD^k truncated once a new term's max row sum drops
/// below tol times the running max row sum.
Matrix neumann_inverse(const WeightedGraph& g, const std::vector<Index>& dropped, double tol, Index max_terms);

/// eps(xbar) = sum_x |(K L)(xbar, x) - (Lbar K_{kept,X})(xbar, x)|, with
/// `kernel` the full Green kernel K_{q'} of g.
Vector local_errors(const CoarseLevel& level, const Matrix& kernel, double qprime);
Vector local_errors(const CoarseLevel& level, const WeightedGraph& g, double qprime);

/// Greedy removal of small coarse rates within the per-row budget
/// eps * alpha_bar / (2 theta alpha_fine), keeping rows summing to zero.
CoarseLevel sparsify(const CoarseLevel& level, const Vector& eps, double theta, double alpha_fine);

/// The coarse generator as a graph for the next level. It may be
/// disconnected after sparsification.
WeightedGraph coarse_graph(const CoarseLevel& level);

}  // namespace rsfw
