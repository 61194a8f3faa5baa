#include "rsfw/norms.hpp"

#include <cmath>

#include "rsfw/error.hpp"

namespace rsfw {

namespace {

void check_p(double p) {
  if (p != 1.0 && p != 2.0 && p != kInfNorm)
    throw Error(ErrorKind::InvalidArgument, "only p in {1, 2, inf} is supported");
}

// Gram matrices above this size fall back to power iteration.
constexpr Index kDenseGramLimit = 2000;

double largest_eigenvalue_power(const Matrix& gram) {
  Vector v = Vector::Constant(gram.rows(), 1.0 / std::sqrt(static_cast<double>(gram.rows())));
  double lambda = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Vector w = gram * v;
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (std::abs(next - lambda) <= 1e-12 * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

}  // namespace

double conjugate_exponent(double p) {
  check_p(p);
  if (p == 1.0) return kInfNorm;
  if (p == kInfNorm) return 1.0;
  return 2.0;
}

double weighted_norm(const Vector& f, const Vector& weights, double p) {
  check_p(p);
  if (f.size() != weights.size()) throw Error(ErrorKind::DimensionMismatch, "norm weights differ in length");
  if (f.size() == 0) return 0.0;
  if (p == kInfNorm) return f.cwiseAbs().maxCoeff();
  if (p == 1.0) return weights.dot(f.cwiseAbs());
  return std::sqrt(weights.dot(f.cwiseAbs2()));
}

double operator_norm(const Matrix& a, const Vector& out_weights, const Vector& in_weights, double p) {
  check_p(p);
  if (a.rows() != out_weights.size() || a.cols() != in_weights.size())
    throw Error(ErrorKind::DimensionMismatch, "operator and weight shapes differ");
  if (a.size() == 0) return 0.0;
  if (p == kInfNorm) return a.cwiseAbs().rowwise().sum().maxCoeff();
  if (p == 1.0) {
    const Vector col = (out_weights.transpose() * a.cwiseAbs()).transpose();
    return col.cwiseQuotient(in_weights).maxCoeff();
  }
  const Matrix b = out_weights.cwiseSqrt().asDiagonal() * a * in_weights.cwiseSqrt().cwiseInverse().asDiagonal();
  const Matrix gram = b.rows() < b.cols() ? Matrix(b * b.transpose()) : Matrix(b.transpose() * b);
  double top = 0.0;
  if (gram.rows() <= kDenseGramLimit) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorKind::ConvergenceFailure, "Gram eigensolver did not converge");
    top = solver.eigenvalues().maxCoeff();
  } else {
    top = largest_eigenvalue_power(gram);
  }
  return std::sqrt(std::max(top, 0.0));
}

}  // namespace rsfw
