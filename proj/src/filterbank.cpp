#include "rsfw/filterbank.hpp"

#include <cmath>
#include <numbers>

#include "rsfw/error.hpp"
#include "rsfw/kernels.hpp"

namespace rsfw {

namespace {

GreenKernel exact_kernel(const WeightedGraph& g, double qprime) {
  const Index n = g.size();
  const Vector sqrt_mu = g.mu().cwiseSqrt();
  SparseMatrix s = -(sqrt_mu.asDiagonal() * g.laplacian() * sqrt_mu.cwiseInverse().asDiagonal());
  const SparseMatrix st = s.transpose();
  s = 0.5 * (s + st);
  for (Index i = 0; i < n; ++i) s.coeffRef(i, i) += qprime;
  const Matrix rhs = qprime * Matrix(sqrt_mu.asDiagonal());
  GreenKernel out;
  out.kernel = sqrt_mu.cwiseInverse().asDiagonal() * solve_spd_columns(s, rhs);
  return out;
}

GreenKernel chebyshev_kernel(const WeightedGraph& g, double qprime, int degree) {
  const Index n = g.size();
  const double alpha = g.alpha();
  const int nodes = degree + 1;
  std::vector<double> coeff(static_cast<std::size_t>(nodes), 0.0);
  for (int j = 0; j < nodes; ++j) {
    const double theta = std::numbers::pi * (j + 0.5) / nodes;
    const double lambda = alpha * (std::cos(theta) + 1.0);
    const double value = qprime / (qprime + lambda);
    for (int k = 0; k < nodes; ++k) coeff[k] += 2.0 / nodes * value * std::cos(k * theta);
  }
  coeff[0] *= 0.5;

  // Y = (-L - alpha Id) / alpha has spectrum in [-1, 1]
  SparseMatrix y = -g.laplacian() / alpha;
  for (Index i = 0; i < n; ++i) y.coeffRef(i, i) -= 1.0;

  Matrix prev = Matrix::Identity(n, n);
  Matrix cur = y * prev;
  Matrix k = coeff[0] * prev + coeff[1] * cur;
  for (int d = 2; d < nodes; ++d) {
    Matrix next = 2.0 * (y * cur) - prev;
    k += coeff[d] * next;
    prev = std::move(cur);
    cur = std::move(next);
  }
  GreenKernel out;
  out.kernel = std::move(k);
  return out;
}

}  // namespace

GreenKernel green_kernel(const WeightedGraph& g, double qprime, const GreenOptions& options) {
  if (!(qprime > 0.0) || !std::isfinite(qprime))
    throw Error(ErrorKind::NonPositiveParameter, "q' must be positive and finite");
  GreenKernel out;
  if (options.method == GreenMethod::Exact || g.alpha() == 0.0) {
    out = exact_kernel(g, qprime);
  } else {
    if (options.degree < 1) throw Error(ErrorKind::DegreeTooLow, "Chebyshev degree must be at least 1");
    out = chebyshev_kernel(g, qprime, options.degree);
  }
  if (!out.kernel.allFinite()) throw Error(ErrorKind::SolverFailure, "Green kernel has non-finite entries");
  out.row_sum_error = (out.kernel.rowwise().sum().array() - 1.0).abs().maxCoeff();
  if (options.method == GreenMethod::Chebyshev && out.row_sum_error > options.residual_threshold)
    throw Error(ErrorKind::DegreeTooLow, "Chebyshev residual " + std::to_string(out.row_sum_error) +
                                             " exceeds the threshold; raise the degree");
  return out;
}

FilterBank build_reconstructors(const WeightedGraph& g, const CoarseLevel& level, double qprime,
                                const GreenOptions& options) {
  return build_reconstructors(g, level, qprime, green_kernel(g, qprime, options).kernel);
}

FilterBank build_reconstructors(const WeightedGraph& g, const CoarseLevel& level, double qprime, Matrix kernel) {
  if (!(qprime > 0.0)) throw Error(ErrorKind::NonPositiveParameter, "q' must be positive");
  const Index n = g.size();
  if (kernel.rows() != n || kernel.cols() != n) throw Error(ErrorKind::DimensionMismatch, "kernel shape differs from graph");
  const Index m = level.kept_size();
  const Index d = level.dropped_size();
  if (m + d != n) throw Error(ErrorKind::DimensionMismatch, "level does not partition the graph");

  FilterBank bank;
  bank.qprime = qprime;
  bank.kernel = std::move(kernel);
  bank.kept = level.kept;
  bank.dropped = level.dropped;
  bank.rbar = Matrix::Zero(n, m);
  bank.rbreve = Matrix::Zero(n, d);

  const Matrix top = Matrix::Identity(m, m) - level.generator / qprime;
  for (Index i = 0; i < m; ++i) {
    bank.rbar.row(level.kept[i]) = top.row(i);
    bank.rbreve.row(level.kept[i]) = level.exit_weights.row(i);
  }
  const Matrix bottom = -Matrix::Identity(d, d) - qprime * level.green_dropped;
  for (Index i = 0; i < d; ++i) {
    bank.rbar.row(level.dropped[i]) = level.hitting.row(i);
    bank.rbreve.row(level.dropped[i]) = bottom.row(i);
  }
  return bank;
}

AnalysisResult analyze(const FilterBank& bank, const Vector& f) {
  if (f.size() != bank.kernel.rows()) throw Error(ErrorKind::DimensionMismatch, "signal length differs from vertex count");
  const Vector kf = bank.kernel * f;
  AnalysisResult out;
  out.fbar.resize(static_cast<Index>(bank.kept.size()));
  out.fbreve.resize(static_cast<Index>(bank.dropped.size()));
  for (std::size_t i = 0; i < bank.kept.size(); ++i) out.fbar[static_cast<Index>(i)] = kf[bank.kept[i]];
  for (std::size_t i = 0; i < bank.dropped.size(); ++i) {
    const Index x = bank.dropped[i];
    out.fbreve[static_cast<Index>(i)] = kf[x] - f[x];
  }
  return out;
}

Vector reconstruct(const FilterBank& bank, const AnalysisResult& coefficients) {
  if (coefficients.fbar.size() != bank.rbar.cols() || coefficients.fbreve.size() != bank.rbreve.cols())
    throw Error(ErrorKind::DimensionMismatch, "coefficient lengths differ from the filter bank");
  return bank.rbar * coefficients.fbar + bank.rbreve * coefficients.fbreve;
}

WaveletFamily wavelet_functions(const FilterBank& bank, const WeightedGraph& g) {
  const Index n = g.size();
  const Vector inv_mu = g.mu().cwiseInverse();
  WaveletFamily out;
  out.scaling.resize(static_cast<Index>(bank.kept.size()), n);
  out.wavelets.resize(static_cast<Index>(bank.dropped.size()), n);
  Matrix analysis = bank.kernel;
  for (std::size_t i = 0; i < bank.kept.size(); ++i)
    out.scaling.row(static_cast<Index>(i)) = bank.kernel.row(bank.kept[i]).cwiseProduct(inv_mu.transpose());
  for (std::size_t i = 0; i < bank.dropped.size(); ++i) {
    const Index x = bank.dropped[i];
    analysis(x, x) -= 1.0;
    out.wavelets.row(static_cast<Index>(i)) = analysis.row(x).cwiseProduct(inv_mu.transpose());
  }
  const Eigen::FullPivLU<Matrix> lu(analysis);
  out.rank = lu.rank();
  const Matrix& packed = lu.matrixLU();
  for (Index i = 0; i < n; ++i) out.log_abs_det += std::log(std::abs(packed(i, i)));
  return out;
}

IntertwiningError intertwining_error(const FilterBank& bank, const WeightedGraph& g, const CoarseLevel& level) {
  const Index m = level.kept_size();
  const Index d = level.dropped_size();
  const Index n = g.size();
  Matrix lambda(m, n);
  for (Index i = 0; i < m; ++i) lambda.row(i) = bank.kernel.row(level.kept[i]);
  const SparseMatrix lap = g.laplacian();

  IntertwiningError out;
  out.error = level.generator * lambda - lambda * lap;
  Matrix lk_dropped(d, n);
  for (Index i = 0; i < d; ++i) {
    lk_dropped.row(i) = bank.qprime * bank.kernel.row(level.dropped[i]);
    lk_dropped(i, level.dropped[i]) -= bank.qprime;
  }
  out.error_schur = level.exit_weights * lk_dropped;
  out.formula_gap = (out.error - out.error_schur).cwiseAbs().maxCoeff();
  out.norm_inf = row_abs_sums(out.error).maxCoeff();
  return out;
}

}  // namespace rsfw
