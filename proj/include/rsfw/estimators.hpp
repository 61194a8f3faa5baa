#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsfw/graph.hpp"

namespace rsfw {

enum class Relation { Equal, AtLeast };

/// One numerical check. For Equal, pass iff |lhs - rhs| <= tolerance; for
/// AtLeast, pass iff lhs >= rhs - tolerance.
struct EstimateReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  Index samples = 0;  // 0 for exact (enumeration or linear algebra) checks
  Relation relation = Relation::Equal;
};

EstimateReport make_report(std::string name, double lhs, double rhs, double tolerance, Index samples,
                           Relation relation = Relation::Equal);

/// Enumerated Z(q) against det(q Id - L), relative tolerance 1e-10.
EstimateReport partition_function_check(const WeightedGraph& g, double q);

/// probabilities[k] = P(|rho| = k), k = 0..n.
struct RootCountLaw {
  Vector probabilities;
};

/// Convolution of Bernoulli(q / (q + lambda_i)) over the spectrum of -L.
RootCountLaw root_count_law_exact(const WeightedGraph& g, double q);
RootCountLaw root_count_law_mc(const WeightedGraph& g, double q, Index samples, std::uint64_t seed);
double total_variation(const RootCountLaw& a, const RootCountLaw& b);

/// Total variation between the Wilson histogram and the exact law; passes
/// below `tolerance` (0.01 at 10^5 samples).
EstimateReport root_count_check(const WeightedGraph& g, double q, Index samples, std::uint64_t seed,
                                double tolerance = 0.01);

/// Empirical P(A in rho) against det K_q[A, A], 3 binomial standard errors.
EstimateReport determinantal_marginal(const WeightedGraph& g, double q, const std::vector<Index>& subset,
                                      Index samples, std::uint64_t seed);

/// All singletons and pairs from a single batch of forests.
std::vector<EstimateReport> determinantal_marginals(const WeightedGraph& g, double q, Index samples,
                                                    std::uint64_t seed);

/// Mean hitting time of the root set from each start against
/// P(|rho| > 1) / q, plus pairwise agreement between starts (3 sigma).
std::vector<EstimateReport> hitting_identity(const WeightedGraph& g, double q, const std::vector<Index>& starts,
                                             Index samples, std::uint64_t seed);

/// Forest-averaged quantities entering the alpha_bar, beta and gamma
/// estimates, computed exactly by enumeration (n <= 8).
struct IdentityTerms {
  double alpha_lhs = 0.0;         // E[mean exit rate of Lbar]
  double alpha_rhs = 0.0;         // q E[|Xd| / (|Xk| + 1)]
  double beta_lhs = 0.0;          // E[(1/|Xk|) sum_k sum_z P(k, z) E_z H]
  double beta_rhs = 0.0;          // E[|Xd| / (alpha |Xk|)]
  double gamma_lhs = 0.0;         // E[(1/|Xd|) sum_d E_d H], 0 when Xd is empty
  double gamma_rhs = 0.0;         // (1/q) E[n / (|Xd| + 1); |Xk| >= 2]
  double gamma_rhs_unrestricted = 0.0;  // (1/q) E[n / (|Xd| + 1)]
  Vector gamma_lhs_by_size;       // index m: E[sum_d E_d H; |Xk| = m]
  Vector gamma_rhs_by_size;       // index m: (n/q) P(|Xk| = m + 1)
  double mean_alpha_bar = 0.0;    // E[alpha_bar]
  double mean_inv_beta = 0.0;     // E[1/beta]
  double mean_inv_gamma = 0.0;    // E[1/gamma]
};

IdentityTerms identity_terms(const WeightedGraph& g, double q);

inline constexpr Index kMaxIdentitySize = 5;

/// The three expectation identities at 1e-10 and the max-versus-mean
/// inequalities for alpha_bar, 1/beta, 1/gamma.
std::vector<EstimateReport> estimate_identities(const WeightedGraph& g, double q);

/// Lower bounds on E|Xk|, E|Xd|, E|Xd cap R_r|. samples = 0 uses the
/// kernel diagonal; otherwise Monte Carlo checks with 3 sigma slack are added.
std::vector<EstimateReport> cardinality_bounds(const WeightedGraph& g, double q, double r, Index samples,
                                               std::uint64_t seed);

struct TildeEstimate {
  double q = 0.0;
  double alpha_tilde = 0.0;
  double inv_beta_tilde = 0.0;
  double inv_gamma_tilde = 0.0;
};

std::vector<TildeEstimate> mc_tilde_estimates(const WeightedGraph& g, const std::vector<double>& q_grid,
                                              Index samples, std::uint64_t seed);

/// Same quantities as exact expectations over the root-count law.
TildeEstimate exact_tilde_expectations(const WeightedGraph& g, double q);

}  // namespace rsfw
