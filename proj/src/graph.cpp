#include "rsfw/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <string>

#include "rsfw/error.hpp"

namespace rsfw {

namespace {

std::string pair_name(Index x, Index y) {
  return "(" + std::to_string(x) + ", " + std::to_string(y) + ")";
}

}  // namespace

WeightedGraph WeightedGraph::from_rates(SparseMatrix rates, Vector mu, bool require_connected,
                                        const GraphTolerances& tol) {
  const Index n = static_cast<Index>(mu.size());
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "graph needs at least one vertex");
  if (rates.rows() != n || rates.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "rate table and measure sizes differ");

  for (Index x = 0; x < n; ++x) {
    if (!(mu[x] > 0.0) || !std::isfinite(mu[x]))
      throw Error(ErrorKind::InvalidArgument,
                  "measure must be strictly positive at vertex " + std::to_string(x));
  }
  mu /= mu.sum();

  rates.prune(0.0);
  rates.makeCompressed();

  WeightedGraph g;
  g.exit_rates_ = Vector::Zero(n);
  double max_flow = 0.0;
  for (Index x = 0; x < n; ++x) {
    for (SparseMatrix::InnerIterator it(rates, x); it; ++it) {
      if (it.col() == x) throw Error(ErrorKind::InvalidArgument, "self-loop at vertex " + std::to_string(x));
      if (!(it.value() > 0.0) || !std::isfinite(it.value()))
        throw Error(ErrorKind::NonPositiveRate, "rate " + pair_name(x, it.col()) + " is not positive");
      g.exit_rates_[x] += it.value();
      max_flow = std::max(max_flow, mu[x] * it.value());
    }
  }

  for (Index x = 0; x < n; ++x) {
    for (SparseMatrix::InnerIterator it(rates, x); it; ++it) {
      const Index y = it.col();
      const double back = rates.coeff(y, x);
      if (back <= 0.0)
        throw Error(ErrorKind::ReversibilityViolation,
                    "rate " + pair_name(x, y) + " has no reverse rate");
      if (std::abs(mu[x] * it.value() - mu[y] * back) > tol.exact * max_flow)
        throw Error(ErrorKind::ReversibilityViolation,
                    "detailed balance fails on pair " + pair_name(x, y));
    }
  }

  g.rates_ = std::move(rates);
  g.mu_ = std::move(mu);
  g.alpha_ = n > 0 ? g.exit_rates_.maxCoeff() : 0.0;

  const auto labels = g.component_labels();
  g.connected_ = std::all_of(labels.begin(), labels.end(), [](Index c) { return c == 0; });
  if (require_connected) {
    if (!g.connected_) throw Error(ErrorKind::Disconnected, "support graph is not connected");
    if (n > 1 && !(g.alpha_ > 0.0)) throw Error(ErrorKind::Disconnected, "graph has no edges");
  }
  return g;
}

double WeightedGraph::rate(Index from, Index to) const { return rates_.coeff(from, to); }

SparseMatrix WeightedGraph::laplacian() const {
  SparseMatrix lap = rates_;
  SparseMatrix diag(size(), size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(size()));
  for (Index x = 0; x < size(); ++x) trip.emplace_back(x, x, -exit_rates_[x]);
  diag.setFromTriplets(trip.begin(), trip.end());
  lap += diag;
  return lap;
}

Matrix WeightedGraph::dense_laplacian() const {
  Matrix lap = Matrix(rates_);
  lap.diagonal() -= exit_rates_;
  return lap;
}

std::vector<Index> WeightedGraph::component_labels() const {
  const Index n = size();
  std::vector<Index> label(static_cast<std::size_t>(n), -1);
  Index next = 0;
  std::queue<Index> frontier;
  for (Index s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    frontier.push(s);
    while (!frontier.empty()) {
      const Index x = frontier.front();
      frontier.pop();
      for (SparseMatrix::InnerIterator it(rates_, x); it; ++it) {
        if (label[it.col()] < 0) {
          label[it.col()] = next;
          frontier.push(it.col());
        }
      }
    }
    ++next;
  }
  return label;
}

WeightedGraph build_graph(Index n, std::span<const RateEntry> entries, const std::optional<Vector>& mu,
                          const GraphTolerances& tol) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "graph needs at least one vertex");
  if (mu && mu->size() != n)
    throw Error(ErrorKind::DimensionMismatch, "measure length differs from vertex count");

  std::map<std::pair<Index, Index>, double> table;
  for (const auto& e : entries) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw Error(ErrorKind::InvalidArgument, "vertex index out of range in " + pair_name(e.from, e.to));
    if (e.from == e.to) throw Error(ErrorKind::InvalidArgument, "self-loop at vertex " + std::to_string(e.from));
    if (!(e.rate > 0.0) || !std::isfinite(e.rate))
      throw Error(ErrorKind::NonPositiveRate, "rate " + pair_name(e.from, e.to) + " is not positive");
    if (!table.emplace(std::pair{e.from, e.to}, e.rate).second)
      throw Error(ErrorKind::InvalidArgument, "duplicate rate entry " + pair_name(e.from, e.to));
  }

  Vector measure = mu ? *mu : Vector::Constant(n, 1.0 / static_cast<double>(n));
  for (Index x = 0; x < n; ++x) {
    if (!(measure[x] > 0.0) || !std::isfinite(measure[x]))
      throw Error(ErrorKind::InvalidArgument, "measure must be strictly positive");
  }

  // complete one-sided pairs by detailed balance
  std::vector<std::pair<std::pair<Index, Index>, double>> completed;
  for (const auto& [key, rate] : table) {
    const auto reverse = std::pair{key.second, key.first};
    if (!table.contains(reverse))
      completed.push_back({reverse, measure[key.first] * rate / measure[key.second]});
  }
  for (const auto& [key, rate] : completed) table.emplace(key, rate);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(table.size());
  for (const auto& [key, rate] : table) trip.emplace_back(key.first, key.second, rate);
  SparseMatrix rates(n, n);
  rates.setFromTriplets(trip.begin(), trip.end());
  return WeightedGraph::from_rates(std::move(rates), std::move(measure), true, tol);
}

Vector laplacian_apply(const WeightedGraph& g, const Vector& f) {
  if (f.size() != g.size())
    throw Error(ErrorKind::DimensionMismatch, "signal length differs from vertex count");
  Vector out = g.rates() * f;
  out -= g.exit_rates().cwiseProduct(f);
  return out;
}

SpectralDecomposition spectral_decompose(const WeightedGraph& g) {
  const Vector sqrt_mu = g.mu().cwiseSqrt();
  const Vector inv_sqrt_mu = sqrt_mu.cwiseInverse();
  // S = D^{1/2} (-L) D^{-1/2} is symmetric when L is mu-reversible
  Matrix sym = -(sqrt_mu.asDiagonal() * g.dense_laplacian() * inv_sqrt_mu.asDiagonal());
  sym = 0.5 * (sym + sym.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::ConvergenceFailure, "symmetric eigensolver did not converge");

  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = inv_sqrt_mu.asDiagonal() * solver.eigenvectors();
  for (Index i = 0; i < out.eigenvectors.cols(); ++i) {
    // sign convention: largest-magnitude coordinate is positive
    Index lead = 0;
    out.eigenvectors.col(i).cwiseAbs().maxCoeff(&lead);
    if (out.eigenvectors(lead, i) < 0.0) out.eigenvectors.col(i) *= -1.0;
  }
  return out;
}

double mean_normalized_eigenvalue(const WeightedGraph& g) {
  return g.exit_rates().sum() / (g.alpha() * static_cast<double>(g.size()));
}

Vector conditioned_measure(const Vector& mu, std::span<const Index> vertices) {
  Vector out(static_cast<Index>(vertices.size()));
  for (std::size_t i = 0; i < vertices.size(); ++i) out[static_cast<Index>(i)] = mu[vertices[i]];
  return out / out.sum();
}

}  // namespace rsfw
