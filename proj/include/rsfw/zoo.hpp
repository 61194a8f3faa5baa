#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsfw/graph.hpp"

namespace rsfw {

struct ZooGraph {
  std::string name;
  WeightedGraph graph;
};

/// Every connected simple graph on 2..max_n vertices up to isomorphism
/// (max_n <= 6), each with unit rates and again with random symmetric
/// conductances and a random non-uniform mu.
std::vector<ZooGraph> connected_graph_zoo(Index max_n, std::uint64_t seed);

/// Connected Erdos-Renyi support with random conductances in [0.5, 2] and
/// mu drawn from [0.5, 1.5] before normalization.
WeightedGraph random_weighted_graph(Index n, double edge_probability, std::uint64_t seed);

/// Random conductances on a fixed support: w(x, y) = c(x, y) / mu(x).
WeightedGraph randomize_rates(Index n, const std::vector<std::pair<Index, Index>>& pairs, std::uint64_t seed);

}  // namespace rsfw
