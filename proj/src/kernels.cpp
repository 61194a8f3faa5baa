#include "rsfw/kernels.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCholesky>

#include "rsfw/error.hpp"
#include "rsfw/forest.hpp"
#include "rsfw/rng.hpp"

namespace rsfw {

namespace {

void check_q(double q) {
  if (!(q > 0.0) || !std::isfinite(q))
    throw Error(ErrorKind::NonPositiveParameter, "killing rate q must be positive");
}

void check_samples(Index samples) {
  if (samples < 0) throw Error(ErrorKind::InvalidArgument, "sample count must be nonnegative");
}

SampleMoments moments(const std::vector<double>& values) {
  SampleMoments m;
  m.samples = static_cast<Index>(values.size());
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    m.standard_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return m;
}

double hitting_walk(const WalkTable& table, const Vector& exit_rates, const std::vector<char>& target,
                    Index start, Rng& rng) {
  double t = 0.0;
  Index x = start;
  while (!target[x]) {
    t += rng.exponential(exit_rates[x]);
    x = table.step(x, 0.0, rng);
  }
  return t;
}

}  // namespace

std::vector<Index> sample_root_counts(const WeightedGraph& g, double q, Index samples,
                                      std::uint64_t seed, Execution exec) {
  check_q(q);
  check_samples(samples);
  const WalkTable table(g);
  const Index n = g.size();
  std::vector<Index> counts(static_cast<std::size_t>(samples), 0);

#pragma omp parallel if (exec == Execution::Parallel)
  {
    WilsonWorkspace work;
    std::vector<Index> parent;
#pragma omp for schedule(static)
    for (Index s = 0; s < samples; ++s) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
      wilson_parents(table, n, q, rng, work, parent);
      counts[s] = static_cast<Index>(std::count(parent.begin(), parent.end(), kRoot));
    }
  }
  return counts;
}

RootInclusionCounts sample_root_inclusions(const WeightedGraph& g, double q, Index samples,
                                           std::uint64_t seed, Execution exec) {
  check_q(q);
  check_samples(samples);
  const WalkTable table(g);
  const Index n = g.size();
  RootInclusionCounts out;
  out.samples = samples;
  out.count_histogram.assign(static_cast<std::size_t>(n + 1), 0);
  out.singles = Vector::Zero(n);
  out.pairs = Matrix::Zero(n, n);

#pragma omp parallel if (exec == Execution::Parallel)
  {
    WilsonWorkspace work;
    std::vector<Index> parent;
    std::vector<Index> roots;
    std::vector<Index> histogram(static_cast<std::size_t>(n + 1), 0);
    Vector singles = Vector::Zero(n);
    Matrix pairs = Matrix::Zero(n, n);
    std::uint64_t steps = 0;
#pragma omp for schedule(static)
    for (Index s = 0; s < samples; ++s) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
      steps += wilson_parents(table, n, q, rng, work, parent);
      roots.clear();
      for (Index x = 0; x < n; ++x)
        if (parent[x] == kRoot) roots.push_back(x);
      ++histogram[roots.size()];
      for (std::size_t a = 0; a < roots.size(); ++a) {
        singles[roots[a]] += 1.0;
        for (std::size_t b = a + 1; b < roots.size(); ++b) {
          pairs(roots[a], roots[b]) += 1.0;
          pairs(roots[b], roots[a]) += 1.0;
        }
      }
    }
    // integer-valued sums, so the merge order does not matter
#pragma omp critical
    {
      for (Index k = 0; k <= n; ++k) out.count_histogram[k] += histogram[k];
      out.singles += singles;
      out.pairs += pairs;
      out.walk_steps += steps;
    }
  }
  return out;
}

SampleMoments sample_forest_hitting_time(const WeightedGraph& g, double q, Index start,
                                         Index samples, std::uint64_t seed, Execution exec) {
  check_q(q);
  check_samples(samples);
  if (start < 0 || start >= g.size()) throw Error(ErrorKind::InvalidArgument, "start vertex out of range");
  const WalkTable table(g);
  const Index n = g.size();
  std::vector<double> values(static_cast<std::size_t>(samples), 0.0);

#pragma omp parallel if (exec == Execution::Parallel)
  {
    WilsonWorkspace work;
    std::vector<Index> parent;
    std::vector<char> is_root;
#pragma omp for schedule(static)
    for (Index s = 0; s < samples; ++s) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
      wilson_parents(table, n, q, rng, work, parent);
      is_root.assign(static_cast<std::size_t>(n), 0);
      for (Index x = 0; x < n; ++x) is_root[x] = parent[x] == kRoot;
      // the walk uses the same stream after the forest, so it is independent of it
      values[s] = hitting_walk(table, g.exit_rates(), is_root, start, rng);
    }
  }
  return moments(values);
}

SampleMoments sample_hitting_time(const WeightedGraph& g, const std::vector<char>& target, Index start,
                                  Index samples, std::uint64_t seed, Execution exec) {
  check_samples(samples);
  if (static_cast<Index>(target.size()) != g.size())
    throw Error(ErrorKind::DimensionMismatch, "target mask length differs from vertex count");
  if (std::none_of(target.begin(), target.end(), [](char c) { return c != 0; }))
    throw Error(ErrorKind::EmptyKeptSet, "hitting target is empty");
  const WalkTable table(g);
  std::vector<double> values(static_cast<std::size_t>(samples), 0.0);

#pragma omp parallel for schedule(static) if (exec == Execution::Parallel)
  for (Index s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    values[s] = hitting_walk(table, g.exit_rates(), target, start, rng);
  }
  return moments(values);
}

Vector sample_trace_exit(const WeightedGraph& g, const std::vector<char>& target, Index start,
                         Index samples, std::uint64_t seed, Execution exec) {
  check_samples(samples);
  if (static_cast<Index>(target.size()) != g.size())
    throw Error(ErrorKind::DimensionMismatch, "target mask length differs from vertex count");
  const WalkTable table(g);
  const double alpha = g.alpha();
  std::vector<Index> exits(static_cast<std::size_t>(samples), 0);

#pragma omp parallel for schedule(static) if (exec == Execution::Parallel)
  for (Index s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    Index x = start;
    do {
      // one step of P = Id + L/alpha: move with probability w(x)/alpha
      if (rng.uniform() * alpha < g.exit_rates()[x]) x = table.step(x, 0.0, rng);
    } while (!target[x]);
    exits[s] = x;
  }

  Vector law = Vector::Zero(g.size());
  for (Index y : exits) law[y] += 1.0;
  if (samples > 0) law /= static_cast<double>(samples);
  return law;
}

Matrix solve_spd_columns(const SparseMatrix& s, const Matrix& rhs, Execution exec) {
  if (s.rows() != s.cols() || s.rows() != rhs.rows())
    throw Error(ErrorKind::DimensionMismatch, "solve dimensions differ");
  const Eigen::SparseMatrix<double> col_major = s;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(col_major);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::SolverFailure, "Cholesky factorization failed");

  const Index cols = rhs.cols();
  Matrix out(rhs.rows(), cols);
  constexpr Index kBlock = 32;
  const Index blocks = (cols + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::Parallel)
  for (Index b = 0; b < blocks; ++b) {
    const Index first = b * kBlock;
    const Index width = std::min(kBlock, cols - first);
    out.middleCols(first, width) = llt.solve(rhs.middleCols(first, width));
  }
  return out;
}

Vector row_abs_sums(const Matrix& a, Execution exec) {
  Vector out(a.rows());
#pragma omp parallel for schedule(static) if (exec == Execution::Parallel)
  for (Index i = 0; i < a.rows(); ++i) out[i] = a.row(i).cwiseAbs().sum();
  return out;
}

}  // namespace rsfw
