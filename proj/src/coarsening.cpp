#include "rsfw/coarsening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "rsfw/error.hpp"
#include "rsfw/filterbank.hpp"
#include "rsfw/kernels.hpp"

namespace rsfw {

namespace {

SparseMatrix sparse_block(const SparseMatrix& a, const std::vector<Index>& rows, const std::vector<Index>& cols,
                          const std::vector<Index>& col_slot) {
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (SparseMatrix::InnerIterator it(a, rows[i]); it; ++it) {
      const Index j = col_slot[it.col()];
      if (j >= 0) trip.emplace_back(static_cast<Index>(i), j, it.value());
    }
  }
  SparseMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

std::vector<Index> slots(Index n, const std::vector<Index>& members) {
  std::vector<Index> slot(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < members.size(); ++i) slot[members[i]] = static_cast<Index>(i);
  return slot;
}

// Restores exact mu-reversibility and zero row sums after roundoff:
// off-diagonal fluxes are averaged and negative ones clamped.
void clean_generator(Matrix& lbar, const Vector& mu) {
  const Index m = lbar.rows();
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      double flux = 0.5 * (mu[i] * lbar(i, j) + mu[j] * lbar(j, i));
      if (!(flux > 0.0)) flux = 0.0;
      lbar(i, j) = flux / mu[i];
      lbar(j, i) = flux / mu[j];
    }
  }
  for (Index i = 0; i < m; ++i) {
    lbar(i, i) = 0.0;
    lbar(i, i) = -lbar.row(i).sum();
  }
}

double max_exit_rate(const Matrix& lbar) {
  return lbar.rows() == 0 ? 0.0 : (-lbar.diagonal()).maxCoeff();
}

bool generator_connected(const Matrix& lbar) {
  const Index m = lbar.rows();
  if (m == 0) return true;
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  Index reached = 1;
  while (!stack.empty()) {
    const Index x = stack.back();
    stack.pop_back();
    for (Index y = 0; y < m; ++y) {
      if (!seen[y] && y != x && lbar(x, y) > 0.0) {
        seen[y] = 1;
        ++reached;
        stack.push_back(y);
      }
    }
  }
  return reached == m;
}

}  // namespace

Matrix neumann_inverse(const WeightedGraph& g, const std::vector<Index>& dropped, double tol, Index max_terms) {
  const Index n = g.size();
  if (dropped.empty()) throw Error(ErrorKind::EmptyComplement, "dropped set is empty");
  if (static_cast<Index>(dropped.size()) >= n) throw Error(ErrorKind::EmptyKeptSet, "dropped set covers the graph");
  if (!(tol > 0.0)) throw Error(ErrorKind::NonPositiveParameter, "tolerance must be positive");
  for (Index d : dropped)
    if (d < 0 || d >= n) throw Error(ErrorKind::InvalidArgument, "dropped vertex out of range");

  const auto slot = slots(n, dropped);
  const double alpha = g.alpha();
  SparseMatrix p = sparse_block(g.laplacian(), dropped, dropped, slot) / alpha;
  for (Index i = 0; i < p.rows(); ++i) p.coeffRef(i, i) += 1.0;

  const Index m = static_cast<Index>(dropped.size());
  Matrix term = Matrix::Identity(m, m);
  Matrix sum = term;
  for (Index k = 1;; ++k) {
    if (k > max_terms) throw Error(ErrorKind::NotConverged, "Neumann series did not converge in " + std::to_string(max_terms) + " terms");
    term = p * term;
    sum += term;
    const double added = term.cwiseAbs().rowwise().sum().maxCoeff();
    const double total = sum.cwiseAbs().rowwise().sum().maxCoeff();
    if (added < tol * total) break;
  }
  return sum / alpha;
}

CoarseLevel schur_complement(const WeightedGraph& g, std::vector<Index> kept, const SchurOptions& options) {
  const Index n = g.size();
  if (kept.empty()) throw Error(ErrorKind::EmptyKeptSet, "kept set is empty");
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw Error(ErrorKind::InvalidArgument, "kept set has repeated vertices");
  if (kept.front() < 0 || kept.back() >= n) throw Error(ErrorKind::InvalidArgument, "kept vertex out of range");
  if (static_cast<Index>(kept.size()) == n)
    throw Error(ErrorKind::FullKeptSet, "kept set is the whole graph; nothing to coarsen");

  CoarseLevel level;
  level.kept = kept;
  const auto kept_slot = slots(n, kept);
  for (Index x = 0; x < n; ++x)
    if (kept_slot[x] < 0) level.dropped.push_back(x);
  const auto dropped_slot = slots(n, level.dropped);
  level.alpha_fine = g.alpha();

  const SparseMatrix lap = g.laplacian();
  const SparseMatrix l_kk = sparse_block(lap, kept, kept, kept_slot);
  const SparseMatrix l_kd = sparse_block(lap, kept, level.dropped, dropped_slot);
  const SparseMatrix l_dk = sparse_block(lap, level.dropped, kept, kept_slot);

  const Index dn = level.dropped_size();
  if (dn <= options.dense_threshold) {
    // D^{1/2} (-L_DD) D^{-1/2} is symmetric positive definite
    Vector sqrt_mu(dn);
    for (Index i = 0; i < dn; ++i) sqrt_mu[i] = std::sqrt(g.mu()[level.dropped[i]]);
    SparseMatrix s = -sparse_block(lap, level.dropped, level.dropped, dropped_slot);
    s = sqrt_mu.asDiagonal() * s * sqrt_mu.cwiseInverse().asDiagonal();
    const SparseMatrix st = s.transpose();
    s = 0.5 * (s + st);
    Matrix sinv;
    try {
      sinv = solve_spd_columns(s, Matrix::Identity(dn, dn));
    } catch (const Error&) {
      throw Error(ErrorKind::SingularBlock, "dropped block of the generator is singular");
    }
    level.green_dropped = sqrt_mu.cwiseInverse().asDiagonal() * sinv * sqrt_mu.asDiagonal();
  } else {
    level.green_dropped = neumann_inverse(g, level.dropped, options.neumann_tol, options.neumann_max_terms);
  }
  if (!level.green_dropped.allFinite()) throw Error(ErrorKind::SingularBlock, "dropped block of the generator is singular");

  level.hitting = level.green_dropped * l_dk;
  level.exit_weights = l_kd * level.green_dropped;
  level.mu_bar = conditioned_measure(g.mu(), kept);
  level.generator_full = Matrix(l_kk) + l_kd * level.hitting;
  clean_generator(level.generator_full, level.mu_bar);
  level.generator = level.generator_full;
  level.alpha_bar_full = max_exit_rate(level.generator_full);
  level.alpha_bar = level.alpha_bar_full;
  level.connected = generator_connected(level.generator);

  level.hitting_times = level.green_dropped.rowwise().sum();
  level.gamma = 1.0 / level.hitting_times.maxCoeff();
  const double excursion = (l_kd * level.hitting_times).maxCoeff() / g.alpha();
  level.beta = excursion > 0.0 ? 1.0 / excursion : std::numeric_limits<double>::infinity();
  return level;
}

Vector local_errors(const CoarseLevel& level, const Matrix& kernel, double qprime) {
  if (!(qprime > 0.0)) throw Error(ErrorKind::NonPositiveParameter, "q' must be positive");
  const Index m = level.kept_size();
  const Index n = kernel.cols();
  Matrix lambda(m, n);
  for (Index i = 0; i < m; ++i) lambda.row(i) = kernel.row(level.kept[i]);
  // K L = L K = q' (K - Id)
  Matrix kl = qprime * lambda;
  for (Index i = 0; i < m; ++i) kl(i, level.kept[i]) -= qprime;
  const Matrix diff = kl - level.generator * lambda;
  return row_abs_sums(diff);
}

Vector local_errors(const CoarseLevel& level, const WeightedGraph& g, double qprime) {
  return local_errors(level, green_kernel(g, qprime).kernel, qprime);
}

CoarseLevel sparsify(const CoarseLevel& level, const Vector& eps, double theta, double alpha_fine) {
  const Index m = level.kept_size();
  if (eps.size() != m) throw Error(ErrorKind::DimensionMismatch, "local error vector length differs from kept set");
  if (!(theta >= 1.0)) throw Error(ErrorKind::InvalidArgument, "theta must be at least 1");
  if (!(alpha_fine > 0.0)) throw Error(ErrorKind::NonPositiveParameter, "fine alpha must be positive");
  if ((eps.array() < 0.0).any()) throw Error(ErrorKind::InvalidArgument, "local errors must be nonnegative");

  CoarseLevel out = level;
  Matrix& lbar = out.generator;
  const Vector budget = eps * (level.alpha_bar / (2.0 * theta * alpha_fine));

  std::vector<std::tuple<double, Index, Index>> pairs;
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j) {
      const double key = std::max(lbar(i, j), lbar(j, i));
      if (key > 0.0) pairs.emplace_back(key, i, j);
    }
  std::sort(pairs.begin(), pairs.end());

  Vector removed = Vector::Zero(m);
  bool changed = false;
  for (const auto& [key, i, j] : pairs) {
    const double wij = lbar(i, j);
    const double wji = lbar(j, i);
    if (removed[i] + wij <= budget[i] && removed[j] + wji <= budget[j]) {
      removed[i] += wij;
      removed[j] += wji;
      lbar(i, j) = 0.0;
      lbar(j, i) = 0.0;
      changed = true;
    }
  }
  lbar.diagonal() += removed;

  out.sparsified = changed;
  out.alpha_bar = max_exit_rate(lbar);
  out.connected = generator_connected(lbar);
  return out;
}

WeightedGraph coarse_graph(const CoarseLevel& level) {
  const Index m = level.kept_size();
  std::vector<Eigen::Triplet<double>> trip;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      if (i != j && level.generator(i, j) > 0.0) trip.emplace_back(i, j, level.generator(i, j));
  SparseMatrix rates(m, m);
  rates.setFromTriplets(trip.begin(), trip.end());
  return WeightedGraph::from_rates(std::move(rates), level.mu_bar, false);
}

}  // namespace rsfw
