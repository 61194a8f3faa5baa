#pragma once

#include <vector>

#include "rsfw/coarsening.hpp"
#include "rsfw/graph.hpp"

namespace rsfw {

enum class GreenMethod { Exact, Chebyshev };

struct GreenOptions {
  GreenMethod method = GreenMethod::Exact;
  int degree = 30;
  double residual_threshold = 1e-6;  // max |row sum - 1| accepted from Chebyshev
};

struct GreenKernel {
  Matrix kernel;              // K_q = q (q Id - L)^{-1}
  double row_sum_error = 0.0; // max |row sum - 1|
};

GreenKernel green_kernel(const WeightedGraph& g, double qprime, const GreenOptions& options = {});

/// One level of analysis and synthesis operators. Rows of rbar and rbreve
/// are indexed by fine-graph vertex ids.
struct FilterBank {
  double qprime = 0.0;
  Matrix kernel;   // full K_{q'} on the fine graph
  Matrix rbar;     // n x |kept|
  Matrix rbreve;   // n x |dropped|
  std::vector<Index> kept;
  std::vector<Index> dropped;
};

struct AnalysisResult {
  Vector fbar;    // K f on kept
  Vector fbreve;  // (K - Id) f on dropped
};

FilterBank build_reconstructors(const WeightedGraph& g, const CoarseLevel& level, double qprime,
                                const GreenOptions& options = {});
FilterBank build_reconstructors(const WeightedGraph& g, const CoarseLevel& level, double qprime, Matrix kernel);

AnalysisResult analyze(const FilterBank& bank, const Vector& f);

/// rbar fbar + rbreve fbreve.
Vector reconstruct(const FilterBank& bank, const AnalysisResult& coefficients);

struct WaveletFamily {
  Matrix scaling;   // row i: phi for kept[i], a density with respect to mu
  Matrix wavelets;  // row i: psi for dropped[i]
  Index rank = 0;   // rank of the stacked analysis matrix
  double log_abs_det = 0.0;
};

WaveletFamily wavelet_functions(const FilterBank& bank, const WeightedGraph& g);

struct IntertwiningError {
  Matrix error;          // Lbar Lambda - Lambda L, rows on kept
  Matrix error_schur;    // L_KD (-L_DD)^{-1} (L K)_{D,X}
  double formula_gap = 0.0;
  double norm_inf = 0.0;
};

IntertwiningError intertwining_error(const FilterBank& bank, const WeightedGraph& g, const CoarseLevel& level);

}  // namespace rsfw
