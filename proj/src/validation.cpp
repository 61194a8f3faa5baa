#include "rsfw/validation.hpp"

#include <algorithm>

#include "rsfw/error.hpp"
#include "rsfw/filterbank.hpp"
#include "rsfw/generators.hpp"
#include "rsfw/rng.hpp"
#include "rsfw/zoo.hpp"

namespace rsfw {

namespace {

constexpr double kQs[] = {0.5, 1.0, 2.0};

void add(ValidationReport& out, const std::string& graph, const EstimateReport& r) {
  out.records.push_back({graph, r});
  if (!r.pass) {
    out.all_pass = false;
    ++out.failures;
  }
}

void add_all(ValidationReport& out, const std::string& graph, const std::vector<EstimateReport>& rs) {
  for (const auto& r : rs) add(out, graph, r);
}

void hand_values(ValidationReport& out) {
  const WeightedGraph k2 = complete_graph(2);
  const std::string name = "K2";
  add(out, name, make_report("hand partition_function q=1", partition_function_check(k2, 1.0).lhs, 3.0, 1e-12, 0));
  add(out, name, make_report("hand root_count P(2) q=2", root_count_law_exact(k2, 2.0).probabilities[2], 0.5, 1e-12, 0));
  const Matrix k = green_kernel(k2, 2.0).kernel;
  add(out, name, make_report("hand kernel diagonal q=2", k(0, 0), 0.75, 1e-12, 0));
  add(out, name, make_report("hand pair minor q=2", k.determinant(), 0.5, 1e-12, 0));
  add(out, name, make_report("hand hitting mean q=2", (1.0 - root_count_law_exact(k2, 2.0).probabilities[1]) / 2.0,
                             0.25, 1e-12, 0));
  add(out, name, make_report("hand alpha_bar identity q=2", identity_terms(k2, 2.0).alpha_lhs, 0.5, 1e-12, 0));
}

}  // namespace

ValidationReport run_validation(Index max_n, Index samples, std::uint64_t seed) {
  if (max_n < 2) throw Error(ErrorKind::InvalidArgument, "max_n must be at least 2");
  if (samples < 0) throw Error(ErrorKind::InvalidArgument, "samples must be nonnegative");
  ValidationReport out;
  hand_values(out);

  for (const auto& z : connected_graph_zoo(std::min<Index>(max_n, 6), seed)) {
    for (double q : kQs) {
      add(out, z.name, partition_function_check(z.graph, q));
      if (z.graph.size() <= 5) add_all(out, z.name, estimate_identities(z.graph, q));
      add_all(out, z.name, cardinality_bounds(z.graph, q, 0.5, 0, 0));
    }
  }
  if (samples == 0) return out;

  struct Named {
    std::string name;
    WeightedGraph graph;
  };
  const std::vector<Named> reference = {
      {"K2", complete_graph(2)},
      {"path3", path_graph(3)},
      {"cycle3", cycle_graph(3)},
      {"random6", random_weighted_graph(6, 0.5, derive_seed(seed, 6))},
  };
  std::uint64_t stream = 100;
  for (const auto& r : reference) {
    add(out, r.name, root_count_check(r.graph, 1.0, samples, derive_seed(seed, stream++)));
    add_all(out, r.name, determinantal_marginals(r.graph, 1.0, samples, derive_seed(seed, stream++)));
    std::vector<Index> starts(static_cast<std::size_t>(r.graph.size()));
    for (Index x = 0; x < r.graph.size(); ++x) starts[x] = x;
    add_all(out, r.name, hitting_identity(r.graph, 1.0, starts, samples, derive_seed(seed, stream++)));
    add_all(out, r.name, cardinality_bounds(r.graph, 1.0, 0.5, samples, derive_seed(seed, stream++)));
  }
  return out;
}

}  // namespace rsfw
