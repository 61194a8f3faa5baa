#include "rsfw/zoo.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "rsfw/error.hpp"
#include "rsfw/rng.hpp"

namespace rsfw {

namespace {

using Pairs = std::vector<std::pair<Index, Index>>;

Pairs all_pairs(Index n) {
  Pairs out;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

bool support_connected(Index n, const Pairs& edges) {
  std::vector<Index> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), Index{0});
  auto find = [&](Index x) {
    while (label[x] != x) x = label[x] = label[label[x]];
    return x;
  };
  Index parts = n;
  for (const auto& [a, b] : edges) {
    const Index ra = find(a), rb = find(b);
    if (ra != rb) {
      label[ra] = rb;
      --parts;
    }
  }
  return parts == 1;
}

std::uint64_t canonical_mask(Index n, const Pairs& pairs, std::uint64_t mask) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::uint64_t best = ~std::uint64_t{0};
  do {
    std::uint64_t image = 0;
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if (!(mask >> e & 1)) continue;
      Index a = perm[pairs[e].first], b = perm[pairs[e].second];
      if (a > b) std::swap(a, b);
      const auto it = std::find(pairs.begin(), pairs.end(), std::pair{a, b});
      image |= std::uint64_t{1} << (it - pairs.begin());
    }
    best = std::min(best, image);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

WeightedGraph unit_graph(Index n, const Pairs& edges) {
  std::vector<RateEntry> entries;
  for (const auto& [a, b] : edges) {
    entries.push_back({a, b, 1.0});
    entries.push_back({b, a, 1.0});
  }
  return build_graph(n, entries);
}

}  // namespace

WeightedGraph randomize_rates(Index n, const Pairs& pairs, std::uint64_t seed) {
  Rng rng(seed);
  Vector mu(n);
  for (Index x = 0; x < n; ++x) mu[x] = 0.5 + rng.uniform();
  mu /= mu.sum();
  std::vector<RateEntry> entries;
  for (const auto& [a, b] : pairs) {
    // a conductance shared by both directions makes w reversible for mu
    const double c = 0.5 + 1.5 * rng.uniform();
    entries.push_back({a, b, c / mu[a]});
    entries.push_back({b, a, c / mu[b]});
  }
  return build_graph(n, entries, mu);
}

std::vector<ZooGraph> connected_graph_zoo(Index max_n, std::uint64_t seed) {
  if (max_n > 6) throw Error(ErrorKind::GraphTooLarge, "the graph zoo is limited to 6 vertices");
  std::vector<ZooGraph> out;
  for (Index n = 2; n <= max_n; ++n) {
    const Pairs pairs = all_pairs(n);
    std::set<std::uint64_t> seen;
    Index index = 0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
      Pairs edges;
      for (std::size_t e = 0; e < pairs.size(); ++e)
        if (mask >> e & 1) edges.push_back(pairs[e]);
      if (!support_connected(n, edges)) continue;
      if (!seen.insert(canonical_mask(n, pairs, mask)).second) continue;
      const std::string tag = std::to_string(n) + "-" + std::to_string(index++);
      out.push_back({"unit-" + tag, unit_graph(n, edges)});
      out.push_back({"rand-" + tag, randomize_rates(n, edges, derive_seed(seed, mask * 8 + static_cast<std::uint64_t>(n)))});
    }
  }
  return out;
}

WeightedGraph random_weighted_graph(Index n, double edge_probability, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "random graphs need at least two vertices");
  if (!(edge_probability > 0.0 && edge_probability <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "edge probability must lie in (0, 1]");
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    Pairs edges;
    for (const auto& pr : all_pairs(n))
      if (rng.uniform() < edge_probability) edges.push_back(pr);
    if (support_connected(n, edges)) return randomize_rates(n, edges, rng.next());
  }
}

}  // namespace rsfw
