#include "rsfw/forest.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "rsfw/error.hpp"

namespace rsfw {

std::vector<Index> SpanningForest::non_roots() const {
  std::vector<Index> out;
  for (Index x = 0; x < size(); ++x)
    if (parent[x] != kRoot) out.push_back(x);
  return out;
}

WalkTable::WalkTable(const WeightedGraph& g) {
  const auto& rates = g.rates();
  const Index n = g.size();
  row_start_.reserve(static_cast<std::size_t>(n + 1));
  row_start_.push_back(0);
  for (Index x = 0; x < n; ++x) {
    double running = 0.0;
    for (SparseMatrix::InnerIterator it(rates, x); it; ++it) {
      running += it.value();
      target_.push_back(it.col());
      cumulative_.push_back(running);
    }
    exit_rate_.push_back(running);
    row_start_.push_back(static_cast<Index>(target_.size()));
  }
}

Index WalkTable::step(Index x, double q, Rng& rng) const {
  const double exit = exit_rate_[x];
  const double u = rng.uniform() * (q + exit);
  if (u < q) return kRoot;
  const double r = u - q;
  const auto first = cumulative_.begin() + row_start_[x];
  const auto last = cumulative_.begin() + row_start_[x + 1];
  auto it = std::upper_bound(first, last, r);
  if (it == last) --it;  // r can round up to the row total
  return target_[static_cast<std::size_t>(it - cumulative_.begin())];
}

std::uint64_t wilson_parents(const WalkTable& table, Index n, double q, Rng& rng,
                             WilsonWorkspace& work, std::vector<Index>& parent) {
  work.in_forest.assign(static_cast<std::size_t>(n), 0);
  work.next.assign(static_cast<std::size_t>(n), kRoot);
  parent.assign(static_cast<std::size_t>(n), kRoot);
  std::uint64_t steps = 0;

  for (Index start = 0; start < n; ++start) {
    if (work.in_forest[start]) continue;
    // walk until killed or absorbed; next[] keeps the last exit, which is
    // exactly the loop-erased path
    Index x = start;
    while (!work.in_forest[x]) {
      ++steps;
      const Index y = table.step(x, q, rng);
      if (y == kRoot) {
        work.in_forest[x] = 1;
        parent[x] = kRoot;
        break;
      }
      work.next[x] = y;
      x = y;
    }
    for (Index v = start; !work.in_forest[v]; v = work.next[v]) {
      work.in_forest[v] = 1;
      parent[v] = work.next[v];
    }
  }
  return steps;
}

SpanningForest forest_from_parents(std::vector<Index> parent, double q) {
  const Index n = static_cast<Index>(parent.size());
  SpanningForest f;
  f.q = q;
  f.tree_label.assign(static_cast<std::size_t>(n), kRoot);
  for (Index x = 0; x < n; ++x) {
    Index v = x;
    Index hops = 0;
    while (parent[v] != kRoot) {
      v = parent[v];
      if (++hops > n) throw Error(ErrorKind::InvalidArgument, "parent map contains a cycle");
    }
    f.tree_label[x] = v;
    if (parent[x] == kRoot) f.roots.push_back(x);
  }
  f.parent = std::move(parent);
  return f;
}

SpanningForest wilson_sample(const WeightedGraph& g, double q, std::uint64_t seed) {
  if (!(q > 0.0) || !std::isfinite(q))
    throw Error(ErrorKind::NonPositiveParameter, "killing rate q must be positive");
  const WalkTable table(g);
  Rng rng(seed);
  WilsonWorkspace work;
  std::vector<Index> parent;
  const auto steps = wilson_parents(table, g.size(), q, rng, work, parent);
  SpanningForest f = forest_from_parents(std::move(parent), q);
  f.walk_steps = steps;
  return f;
}

double forest_weight(const WeightedGraph& g, const SpanningForest& forest, double q) {
  if (!(q > 0.0)) throw Error(ErrorKind::NonPositiveParameter, "q must be positive");
  if (forest.size() != g.size()) throw Error(ErrorKind::DimensionMismatch, "forest size differs from graph");
  double weight = 1.0;
  for (Index x = 0; x < forest.size(); ++x) {
    const Index p = forest.parent[x];
    if (p == kRoot) {
      weight *= q;
    } else {
      const double w = g.rate(x, p);
      if (!(w > 0.0))
        throw Error(ErrorKind::EdgeNotInGraph,
                    "forest edge " + std::to_string(x) + "->" + std::to_string(p) + " is not in the graph");
      weight *= w;
    }
  }
  return weight;
}

void for_each_forest(const WeightedGraph& g, double q,
                     const std::function<void(const std::vector<Index>&, Index, double)>& visit) {
  const Index n = g.size();
  if (n > kMaxEnumerationSize)
    throw Error(ErrorKind::GraphTooLarge, "forest enumeration is limited to " +
                                              std::to_string(kMaxEnumerationSize) + " vertices");
  if (!(q > 0.0)) throw Error(ErrorKind::NonPositiveParameter, "q must be positive");

  // choice lists: ROOT first, then neighbours in increasing order
  std::vector<std::vector<Index>> choices(static_cast<std::size_t>(n));
  for (Index x = 0; x < n; ++x) {
    choices[x].push_back(kRoot);
    for (SparseMatrix::InnerIterator it(g.rates(), x); it; ++it) choices[x].push_back(it.col());
  }

  std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
  std::vector<Index> parent(static_cast<std::size_t>(n), kRoot);
  std::vector<int> state(static_cast<std::size_t>(n));
  for (;;) {
    for (Index x = 0; x < n; ++x) parent[x] = choices[x][pick[x]];

    // acyclicity: colour-walk each chain
    std::fill(state.begin(), state.end(), 0);
    bool acyclic = true;
    for (Index x = 0; x < n && acyclic; ++x) {
      Index v = x;
      std::vector<Index> chain;
      while (v != kRoot && state[v] == 0) {
        state[v] = 1;
        chain.push_back(v);
        v = parent[v];
      }
      if (v != kRoot && state[v] == 1) acyclic = false;
      for (Index c : chain) state[c] = 2;
    }

    if (acyclic) {
      double weight = 1.0;
      Index roots = 0;
      for (Index x = 0; x < n; ++x) {
        if (parent[x] == kRoot) {
          weight *= q;
          ++roots;
        } else {
          weight *= g.rate(x, parent[x]);
        }
      }
      visit(parent, roots, weight);
    }

    Index k = 0;
    while (k < n) {
      if (++pick[k] < choices[k].size()) break;
      pick[k] = 0;
      ++k;
    }
    if (k == n) break;
  }
}

ForestEnsemble enumerate_forests(const WeightedGraph& g, double q) {
  ForestEnsemble ens;
  for_each_forest(g, q, [&](const std::vector<Index>& parent, Index, double weight) {
    ens.forests.push_back(forest_from_parents(parent, q));
    ens.weights.push_back(weight);
  });
  // summed smallest-first for a stable partition sum
  std::vector<double> sorted = ens.weights;
  std::sort(sorted.begin(), sorted.end());
  for (double w : sorted) ens.partition_sum += w;
  return ens;
}

void write_forest(std::ostream& out, const SpanningForest& forest) {
  for (Index x = 0; x < forest.size(); ++x) out << x << ' ' << forest.parent[x] << '\n';
}

}  // namespace rsfw
