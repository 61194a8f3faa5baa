#pragma once

#include <limits>

#include "rsfw/graph.hpp"

namespace rsfw {

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// (sum_x w(x) |f(x)|^p)^{1/p}, or max |f| for p = infinity. Only p in
/// {1, 2, infinity} is supported.
double weighted_norm(const Vector& f, const Vector& weights, double p);

/// Operator norm of A : l_p(in_weights) -> l_p(out_weights). Exact for
/// p = 1 and p = infinity; p = 2 uses the Gram matrix spectrum.
double operator_norm(const Matrix& a, const Vector& out_weights, const Vector& in_weights, double p);

/// Conjugate exponent: 1 <-> infinity, 2 <-> 2.
double conjugate_exponent(double p);

}  // namespace rsfw
