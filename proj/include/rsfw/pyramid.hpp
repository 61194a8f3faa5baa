#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsfw/coarsening.hpp"
#include "rsfw/filterbank.hpp"
#include "rsfw/graph.hpp"

namespace rsfw {

struct PyramidConfig {
  Index max_levels = 64;
  Index min_size = 16;
  double theta1 = 0.125;
  double theta2 = 1.0;
  Index grid_size = 16;
  Index samples = 1;
  bool sparsify = false;
  double theta = 4.0;
  std::uint64_t seed = 0;
  Index max_resamples = 8;
  GreenOptions green;
  SchurOptions schur;
};

struct QSelection {
  double q = 0.0;
  Index best = 0;
  std::vector<double> grid;
  std::vector<double> objective;  // alpha_tilde / beta_tilde per grid point
  std::vector<std::uint64_t> seeds;
};

/// Monte Carlo objective alpha~(q) * (1 / beta~(q)) from `samples` forests.
double q_objective(const WeightedGraph& g, double q, Index samples, std::uint64_t seed);

/// Geometric grid on [theta1 alpha, theta2 alpha]; returns the minimizer of
/// q_objective, ties going to the larger q.
QSelection select_q(const WeightedGraph& g, double theta1, double theta2, Index grid_size, Index samples,
                    std::uint64_t seed);

/// q' = 2 alpha_bar |kept| / |dropped|, using the unsparsified alpha_bar.
double select_qprime(const CoarseLevel& coarse);

struct PyramidLevel {
  Index index = 0;
  WeightedGraph graph;              // (X_i, L_i, mu_i)
  std::vector<Index> vertex_ids;    // original vertex id of each vertex of X_i
  double q = 0.0;
  double qprime = 0.0;
  Index draws = 1;                  // forests drawn before a usable root set
  CoarseLevel coarse;
  FilterBank bank;
  Vector local_errors;              // empty unless sparsified
  double theta = 0.0;               // 0 when not sparsified
};

struct Pyramid {
  std::vector<PyramidLevel> levels;
  std::string stop_reason;
};

/// Builds the level stack; it depends on the graph, config and seed but not
/// on any signal.
Pyramid build_pyramid(const WeightedGraph& g, const PyramidConfig& config);

/// [f_K, g_K, ..., g_1]. details[j] lives on the dropped set of level j.
struct PyramidCoefficients {
  Vector approx;
  std::vector<Index> approx_ids;
  std::vector<Vector> details;
  std::vector<std::vector<Index>> detail_ids;
  std::vector<std::vector<Index>> kept_ids;  // original ids of X_{j+1}
  std::vector<double> q;
  std::vector<double> qprime;

  Index levels() const noexcept { return static_cast<Index>(details.size()); }
  Index coefficient_count() const;
};

PyramidCoefficients analyze_pyramid(const std::vector<PyramidLevel>& levels, const Vector& f);

struct Decomposition {
  PyramidCoefficients coefficients;
  Pyramid pyramid;
};

Decomposition decompose(const WeightedGraph& g, const Vector& f, const PyramidConfig& config);

Vector reconstruct_full(const PyramidCoefficients& coeffs, const std::vector<PyramidLevel>& levels);

/// Approximation at depth k: Rbar_0 ... Rbar_{k-1} f_k.
Vector approximation(const PyramidCoefficients& coeffs, const std::vector<PyramidLevel>& levels);

struct RankedDetail {
  Index level = 0;
  Index slot = 0;       // position inside details[level]
  Index vertex = 0;     // original vertex id
  double score = 0.0;   // |g| times the l2(mu) norm of the dual vector
};

struct CompressionReport {
  double kept_fraction = 0.0;
  Index kept_count = 0;
  Index detail_count = 0;
  double relative_l2_error = 0.0;
  std::vector<Index> per_level_kept;
};

struct CompressionResult {
  Vector signal;
  CompressionReport report;
};

/// Precomputes dual-vector norms and the detail ranking once so that many
/// keep fractions can be evaluated cheaply.
class Compressor {
 public:
  Compressor(const PyramidCoefficients& coeffs, const std::vector<PyramidLevel>& levels, Vector reference);

  CompressionResult compress(double keep_fraction) const;
  const std::vector<RankedDetail>& ranking() const noexcept { return ranking_; }
  const std::vector<Vector>& dual_norms() const noexcept { return dual_norms_; }

 private:
  const PyramidCoefficients* coeffs_;
  const std::vector<PyramidLevel>* levels_;
  Vector reference_;
  Vector mu_;
  std::vector<Vector> dual_norms_;
  std::vector<RankedDetail> ranking_;
};

/// Reference signal is the full reconstruction of `coeffs`.
CompressionResult compress(const PyramidCoefficients& coeffs, const std::vector<PyramidLevel>& levels,
                           double keep_fraction);

/// Per-level constants of the Jackson inequality.
struct JacksonConstants {
  double p = 0.0;
  std::vector<double> rbar;
  std::vector<double> rbreve;
  std::vector<double> e;
};

JacksonConstants jackson_exact_constants(const std::vector<PyramidLevel>& levels, double p);
JacksonConstants jackson_bound_constants(const std::vector<PyramidLevel>& levels, double p);

struct JacksonResult {
  double lhs = 0.0;
  double rhs = 0.0;        // with exact operator norms
  double rhs_bound = 0.0;  // with the closed-form constants
};

JacksonResult jackson_bound(const std::vector<PyramidLevel>& levels, const WeightedGraph& g, const Vector& f,
                            double p);
JacksonResult jackson_bound(const std::vector<PyramidLevel>& levels, const WeightedGraph& g, const Vector& f,
                            const JacksonConstants& exact, const JacksonConstants& bound);

/// ||U_k f||_p for k = 1..levels, with the original mu.
std::vector<double> analysis_norms(const std::vector<PyramidLevel>& levels, const Vector& mu, const Vector& f,
                                   double p);

}  // namespace rsfw
