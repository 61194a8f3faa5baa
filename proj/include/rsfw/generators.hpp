#pragma once

#include <cstdint>
#include <vector>

#include "rsfw/graph.hpp"

namespace rsfw {

WeightedGraph path_graph(Index n);
WeightedGraph cycle_graph(Index n);
WeightedGraph complete_graph(Index n);
/// rows x cols lattice with unit rates, vertex r * cols + c.
WeightedGraph grid_graph(Index rows, Index cols);

struct GeometricGraph {
  WeightedGraph graph;
  Matrix points;      // n x 2, in the unit square
  double radius = 0.0;
  int attempts = 0;
};

/// n uniform points in the unit square joined within `radius` (default
/// sqrt(2 log n / (pi n))) with weights exp(-d^2 / (2 sigma^2)), sigma =
/// radius / 2. Redraws up to `max_attempts` times if disconnected.
GeometricGraph geometric_graph(Index n, std::uint64_t seed, double radius = 0.0, int max_attempts = 10);

struct PiecewiseSignal {
  Vector values;
  std::vector<Index> breakpoints;  // b means a jump between b - 1 and b
};

/// Piecewise constant and linear signal on a path with five jumps; the
/// first and last pieces are constant.
PiecewiseSignal piecewise_regular_signal(Index n);

/// Distance on the path from x to the nearest breakpoint edge.
Index breakpoint_distance(Index x, const std::vector<Index>& breakpoints);

/// +1 / -1 according to the sign of the first nontrivial eigenvector
/// (zero coordinates map to +1).
Vector sign_first_mode(const WeightedGraph& g);

}  // namespace rsfw
