#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "rsfw/graph.hpp"
#include "rsfw/rng.hpp"

namespace rsfw {

inline constexpr Index kRoot = -1;

/// Rooted spanning oriented forest: every vertex points to its parent or to
/// kRoot, and following parents always ends at a root.
struct SpanningForest {
  std::vector<Index> parent;
  std::vector<Index> roots;       // sorted
  std::vector<Index> tree_label;  // root of the tree containing each vertex
  double q = 0.0;
  std::uint64_t walk_steps = 0;   // vertices visited by the random walks

  Index size() const noexcept { return static_cast<Index>(parent.size()); }
  std::vector<Index> non_roots() const;
};

/// Per-row cumulative rate table used to draw the next vertex of a walk in
/// O(log degree).
class WalkTable {
 public:
  explicit WalkTable(const WeightedGraph& g);

  /// Advances the walk from x: returns kRoot if killed at rate q, otherwise
  /// the next vertex.
  Index step(Index x, double q, Rng& rng) const;

 private:
  std::vector<Index> row_start_;
  std::vector<Index> target_;
  std::vector<double> cumulative_;
  std::vector<double> exit_rate_;
};

/// Reusable buffers for repeated sampling on the same graph.
struct WilsonWorkspace {
  std::vector<char> in_forest;
  std::vector<Index> next;
};

/// Draws a forest from pi_q with Wilson's algorithm and exponential killing.
/// Walks start at the lowest-index uncovered vertex. Deterministic in
/// (g, q, seed).
SpanningForest wilson_sample(const WeightedGraph& g, double q, std::uint64_t seed);

/// Lower-level form used by the batch kernels: fills `parent` and returns the
/// number of walk steps.
std::uint64_t wilson_parents(const WalkTable& table, Index n, double q, Rng& rng,
                             WilsonWorkspace& work, std::vector<Index>& parent);

/// Fills roots and tree labels from a parent map; throws if it has a cycle.
SpanningForest forest_from_parents(std::vector<Index> parent, double q);

/// q^{|roots|} * product of w(x, parent(x)).
double forest_weight(const WeightedGraph& g, const SpanningForest& forest, double q);

struct ForestEnsemble {
  std::vector<SpanningForest> forests;
  std::vector<double> weights;
  double partition_sum = 0.0;
};

/// Largest graph accepted by the enumeration oracle.
inline constexpr Index kMaxEnumerationSize = 8;

/// Visits every spanning oriented forest once with its weight w_q.
void for_each_forest(const WeightedGraph& g, double q,
                     const std::function<void(const std::vector<Index>& parent, Index root_count,
                                              double weight)>& visit);

/// Exhaustive list of all spanning oriented forests (n <= 8).
ForestEnsemble enumerate_forests(const WeightedGraph& g, double q);

/// Debug dump: one `vertex parent` line per vertex, -1 for roots.
void write_forest(std::ostream& out, const SpanningForest& forest);

}  // namespace rsfw
