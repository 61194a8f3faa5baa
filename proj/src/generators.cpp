#include "rsfw/generators.hpp"

#include <cmath>
#include <numbers>

#include "rsfw/error.hpp"
#include "rsfw/rng.hpp"

namespace rsfw {

namespace {

void check_size(Index n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "generated graphs need at least two vertices");
}

WeightedGraph from_pairs(Index n, const std::vector<std::pair<Index, Index>>& pairs) {
  std::vector<RateEntry> entries;
  entries.reserve(2 * pairs.size());
  for (const auto& [a, b] : pairs) {
    entries.push_back({a, b, 1.0});
    entries.push_back({b, a, 1.0});
  }
  return build_graph(n, entries);
}

}  // namespace

WeightedGraph path_graph(Index n) {
  check_size(n);
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
  return from_pairs(n, pairs);
}

WeightedGraph cycle_graph(Index n) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "a cycle needs at least three vertices");
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < n; ++i) pairs.emplace_back(i, (i + 1) % n);
  return from_pairs(n, pairs);
}

WeightedGraph complete_graph(Index n) {
  check_size(n);
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  return from_pairs(n, pairs);
}

WeightedGraph grid_graph(Index rows, Index cols) {
  if (rows < 1 || cols < 1 || rows * cols < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least two vertices");
  std::vector<std::pair<Index, Index>> pairs;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      const Index v = r * cols + c;
      if (c + 1 < cols) pairs.emplace_back(v, v + 1);
      if (r + 1 < rows) pairs.emplace_back(v, v + cols);
    }
  return from_pairs(rows * cols, pairs);
}

GeometricGraph geometric_graph(Index n, std::uint64_t seed, double radius, int max_attempts) {
  check_size(n);
  const double nd = static_cast<double>(n);
  if (radius <= 0.0) radius = std::sqrt(2.0 * std::log(nd) / (std::numbers::pi * nd));
  const double sigma = radius / 2.0;

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    Matrix pts(n, 2);
    for (Index i = 0; i < n; ++i) {
      pts(i, 0) = rng.uniform();
      pts(i, 1) = rng.uniform();
    }
    std::vector<RateEntry> entries;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) {
        const double d2 = (pts.row(i) - pts.row(j)).squaredNorm();
        if (d2 <= radius * radius) {
          const double w = std::exp(-d2 / (2.0 * sigma * sigma));
          entries.push_back({i, j, w});
          entries.push_back({j, i, w});
        }
      }
    try {
      GeometricGraph out{build_graph(n, entries), pts, radius, attempt + 1};
      return out;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Disconnected) throw;
    }
  }
  throw Error(ErrorKind::RadiusDisconnected,
              "geometric graph stayed disconnected after " + std::to_string(max_attempts) + " draws; enlarge the radius");
}

PiecewiseSignal piecewise_regular_signal(Index n) {
  if (n < 12) throw Error(ErrorKind::InvalidArgument, "piecewise signal needs at least 12 vertices");
  PiecewiseSignal s;
  const double nd = static_cast<double>(n);
  for (double frac : {0.15, 0.32, 0.5, 0.66, 0.83}) s.breakpoints.push_back(static_cast<Index>(std::lround(frac * nd)));
  s.values.resize(n);
  const auto& b = s.breakpoints;
  for (Index x = 0; x < n; ++x) {
    double v;
    if (x < b[0]) {
      v = 1.0;
    } else if (x < b[1]) {
      v = -1.0 + 1.5 * static_cast<double>(x - b[0]) / static_cast<double>(b[1] - b[0]);
    } else if (x < b[2]) {
      v = 2.0;
    } else if (x < b[3]) {
      v = -0.5 * static_cast<double>(x - b[2]) / static_cast<double>(b[3] - b[2]);
    } else if (x < b[4]) {
      v = 0.75;
    } else {
      v = -1.0;
    }
    s.values[x] = v;
  }
  return s;
}

Index breakpoint_distance(Index x, const std::vector<Index>& breakpoints) {
  Index best = -1;
  for (Index b : breakpoints) {
    const Index d = x < b ? b - 1 - x : x - b;
    if (best < 0 || d < best) best = d;
  }
  return best;
}

Vector sign_first_mode(const WeightedGraph& g) {
  const auto spec = spectral_decompose(g);
  const Vector e1 = spec.eigenvectors.col(1);
  const double scale = e1.cwiseAbs().maxCoeff();
  Vector out(g.size());
  for (Index x = 0; x < g.size(); ++x) out[x] = e1[x] < -1e-12 * scale ? -1.0 : 1.0;
  return out;
}

}  // namespace rsfw
