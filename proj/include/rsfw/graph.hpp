#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rsfw {

using Index = std::ptrdiff_t;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// One entry of the rate table: w(from, to) = rate.
struct RateEntry {
  Index from = 0;
  Index to = 0;
  double rate = 0.0;
};

struct GraphTolerances {
  double exact = 1e-12;      // identities that hold exactly in exact arithmetic
  double iterative = 1e-8;   // eigen / iterative solver results
};

/// A finite irreducible (or, for sparsified coarse levels, component-wise
/// irreducible) Markov generator that is reversible with respect to mu.
///
/// Immutable once built; every accessor is const and safe to share across
/// threads.
class WeightedGraph {
 public:
  /// Validating constructor used by build_graph and by the coarsening code.
  /// `rates` holds off-diagonal jump rates only.
  static WeightedGraph from_rates(SparseMatrix rates, Vector mu, bool require_connected,
                                  const GraphTolerances& tol = {});

  Index size() const noexcept { return static_cast<Index>(mu_.size()); }
  const SparseMatrix& rates() const noexcept { return rates_; }
  const Vector& mu() const noexcept { return mu_; }
  /// Total exit rate w(x) = sum_y w(x, y).
  const Vector& exit_rates() const noexcept { return exit_rates_; }
  double alpha() const noexcept { return alpha_; }
  bool connected() const noexcept { return connected_; }

  double rate(Index from, Index to) const;

  /// L = W - diag(w(x)).
  SparseMatrix laplacian() const;
  Matrix dense_laplacian() const;

  /// Connected components of the support graph (label per vertex, 0-based).
  std::vector<Index> component_labels() const;

 private:
  SparseMatrix rates_;
  Vector mu_;
  Vector exit_rates_;
  double alpha_ = 0.0;
  bool connected_ = true;
};

/// Builds and validates a graph from rate entries. A pair listed in one
/// direction only is completed by detailed balance. If `mu` is omitted every
/// listed pair must be symmetric and mu is uniform.
WeightedGraph build_graph(Index n, std::span<const RateEntry> entries,
                          const std::optional<Vector>& mu = std::nullopt,
                          const GraphTolerances& tol = {});

/// (Lf)(x) = sum_y w(x, y) (f(y) - f(x)).
Vector laplacian_apply(const WeightedGraph& g, const Vector& f);

struct SpectralDecomposition {
  Vector eigenvalues;   // of -L, nondecreasing
  Matrix eigenvectors;  // columns, orthonormal in l2(mu)
};

/// Dense eigendecomposition of -L through the mu^{1/2} similarity transform.
SpectralDecomposition spectral_decompose(const WeightedGraph& g);

/// trace(-L) / (alpha n), the mean normalized eigenvalue.
double mean_normalized_eigenvalue(const WeightedGraph& g);

/// mu restricted to `vertices` and renormalized to a probability vector.
Vector conditioned_measure(const Vector& mu, std::span<const Index> vertices);

}  // namespace rsfw
