#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "rsfw/coarsening.hpp"
#include "rsfw/error.hpp"
#include "rsfw/estimators.hpp"
#include "rsfw/forest.hpp"
#include "rsfw/generators.hpp"
#include "rsfw/zoo.hpp"

using namespace rsfw;

namespace {

/// Brute-force expectations over the forest law, computed with dense Schur
/// complements built here rather than by the library.
struct Expectations {
  double alpha_lhs = 0, alpha_rhs = 0, beta_lhs = 0, beta_rhs = 0, gamma_lhs = 0, gamma_rhs = 0;
  double kept = 0, dropped = 0;
};

Expectations brute_force(const WeightedGraph& g, double q) {
  const Matrix l = oracle::generator(g);
  const Index n = g.size();
  const double a = g.alpha();
  Expectations e;
  double z = 0;
  for_each_forest(g, q, [&](const std::vector<Index>& parent, Index, double w) {
    std::vector<Index> kept;
    for (Index x = 0; x < n; ++x)
      if (parent[x] == kRoot) kept.push_back(x);
    const auto dropped = oracle::complement(n, kept);
    const double nk = static_cast<double>(kept.size()), nd = static_cast<double>(dropped.size());
    z += w;
    e.kept += w * nk;
    e.dropped += w * nd;
    e.alpha_rhs += w * q * nd / (nk + 1);
    e.beta_rhs += w * nd / (a * nk);
    if (kept.size() >= 2) e.gamma_rhs += w * n / (nd + 1) / q;
    if (dropped.empty()) {
      e.alpha_lhs += w * (-l.diagonal().sum()) / n;
      return;
    }
    const Matrix lbar = oracle::schur(l, kept);
    e.alpha_lhs += w * (-lbar.diagonal().sum()) / nk;
    const Vector h = (-oracle::block(l, dropped, dropped)).inverse().rowwise().sum();
    double excursion = 0;
    for (Index k : kept)
      for (std::size_t j = 0; j < dropped.size(); ++j) excursion += l(k, dropped[j]) / a * h(j);
    e.beta_lhs += w * excursion / nk;
    e.gamma_lhs += w * h.sum() / nd;
  });
  for (double* v : {&e.alpha_lhs, &e.alpha_rhs, &e.beta_lhs, &e.beta_rhs, &e.gamma_lhs, &e.gamma_rhs, &e.kept,
                    &e.dropped})
    *v /= z;
  return e;
}

}  // namespace

TEST_CASE("make_report semantics") {
  CHECK(make_report("x", 1.0, 1.05, 0.1, 0).pass);
  CHECK(!make_report("x", 1.0, 1.2, 0.1, 0).pass);
  CHECK(make_report("x", 3.0, 1.0, 0.0, 0, Relation::AtLeast).pass);
  CHECK(!make_report("x", 0.5, 1.0, 0.0, 0, Relation::AtLeast).pass);
}

TEST_CASE("partition_function_check examples") {
  const auto r = partition_function_check(oracle::k2(), 1.0);
  CHECK(r.lhs == doctest::Approx(3.0));
  CHECK(r.rhs == doctest::Approx(3.0));
  CHECK(r.pass);
  CHECK(partition_function_check(oracle::path3(), 1.0).lhs == doctest::Approx(8.0));
  const double q = 1e-6;
  CHECK(partition_function_check(oracle::path3(), q).rhs / q == doctest::Approx(3.0).epsilon(1e-5));
}

TEST_CASE("root_count_law exact examples") {
  const auto law = root_count_law_exact(oracle::cycle3(), 3.0);
  REQUIRE(law.probabilities.size() == 4);
  CHECK(law.probabilities(0) == 0.0);
  CHECK(law.probabilities(1) == doctest::Approx(0.25));
  CHECK(law.probabilities(2) == doctest::Approx(0.5));
  CHECK(law.probabilities(3) == doctest::Approx(0.25));
  CHECK(root_count_law_exact(oracle::k2(), 2.0).probabilities(2) == doctest::Approx(0.5));

  for (const auto& [name, g] : connected_graph_zoo(5, 3)) {
    for (double q : {0.3, 1.0, 4.0}) {
      const auto p = root_count_law_exact(g, q).probabilities;
      CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
      CHECK(p(0) == 0.0);
      const auto ref = oracle::root_count_law(oracle::generator(g), q);
      for (Index k = 0; k < p.size(); ++k) CHECK(p(k) == doctest::Approx(ref[k]).epsilon(1e-10));
      std::vector<double> byenum(g.size() + 1, 0.0);
      double z = 0;
      for_each_forest(g, q, [&](const std::vector<Index>&, Index r, double w) {
        byenum[r] += w;
        z += w;
      });
      for (Index k = 0; k < p.size(); ++k) CHECK(std::abs(p(k) - byenum[k] / z) <= 1e-10);
    }
  }
}

TEST_CASE("root_count_check in Monte Carlo mode") {
  for (auto g : {oracle::cycle3(), oracle::path3(), oracle::k2(), random_weighted_graph(6, 0.5, 1)}) {
    const auto r = root_count_check(g, 1.0, 100000, 7);
    CHECK(r.pass);
    CHECK(r.lhs < 0.01);
    CHECK(r.samples == 100000);
  }
  const auto mc = root_count_law_mc(oracle::k2(), 2.0, 1000, 1);
  CHECK(mc.probabilities.sum() == doctest::Approx(1.0));
  CHECK(total_variation(mc, mc) == 0.0);
}

TEST_CASE("determinantal marginals") {
  const auto g = oracle::k2();
  const auto single = determinantal_marginal(g, 2.0, {0}, 100000, 3);
  CHECK(single.rhs == doctest::Approx(0.75));
  CHECK(single.pass);
  const auto pair = determinantal_marginal(g, 2.0, {0, 1}, 100000, 4);
  CHECK(pair.rhs == doctest::Approx(0.5));
  CHECK(pair.pass);
  const auto empty = determinantal_marginal(g, 2.0, {}, 10, 4);
  CHECK(empty.lhs == 1.0);
  CHECK(empty.rhs == 1.0);

  const auto all = determinantal_marginals(random_weighted_graph(5, 0.6, 2), 0.8, 100000, 9);
  CHECK(all.size() == 5 + 10);
  Index failures = 0;
  for (const auto& r : all) failures += !r.pass;
  CHECK(failures <= 1);
}

TEST_CASE("hitting identity") {
  const auto k2 = hitting_identity(oracle::k2(), 2.0, {0, 1}, 100000, 5);
  for (const auto& r : k2) {
    CAPTURE(r.name);
    CHECK(r.pass);
  }
  CHECK(k2.front().rhs == doctest::Approx(0.25));
  const auto p3 = hitting_identity(oracle::path3(), 1.0, {0, 1}, 100000, 6);
  for (const auto& r : p3) {
    CAPTURE(r.name);
    CHECK(r.pass);
  }
}

TEST_CASE("identity terms against a brute-force oracle") {
  for (const auto& [name, g] : connected_graph_zoo(5, 12)) {
    for (double q : {0.5, 1.0, 2.0}) {
      CAPTURE(name);
      CAPTURE(q);
      const auto t = identity_terms(g, q);
      const auto e = brute_force(g, q);
      CHECK(t.alpha_lhs == doctest::Approx(e.alpha_lhs).epsilon(1e-10));
      CHECK(t.alpha_rhs == doctest::Approx(e.alpha_rhs).epsilon(1e-10));
      CHECK(t.beta_lhs == doctest::Approx(e.beta_lhs).epsilon(1e-10));
      CHECK(t.beta_rhs == doctest::Approx(e.beta_rhs).epsilon(1e-10));
      CHECK(t.gamma_lhs == doctest::Approx(e.gamma_lhs).epsilon(1e-10));
      CHECK(t.gamma_rhs == doctest::Approx(e.gamma_rhs).epsilon(1e-10));
      // the identities themselves, evaluated on the oracle's numbers
      CHECK(std::abs(e.alpha_lhs - e.alpha_rhs) <= 1e-10 * std::max(1.0, e.alpha_rhs));
      CHECK(std::abs(e.beta_lhs - e.beta_rhs) <= 1e-10 * std::max(1.0, e.beta_rhs));
      CHECK(std::abs(e.gamma_lhs - e.gamma_rhs) <= 1e-10 * std::max(1.0, e.gamma_rhs));
      for (Index m = 0; m < t.gamma_lhs_by_size.size(); ++m)
        CHECK(std::abs(t.gamma_lhs_by_size(m) - t.gamma_rhs_by_size(m)) <= 1e-10 * std::max(1.0, t.gamma_rhs_by_size(m)));
      CHECK(t.mean_alpha_bar >= t.alpha_lhs - 1e-12);
      CHECK(t.mean_inv_beta >= t.beta_lhs - 1e-12);
      CHECK(t.mean_inv_gamma >= t.gamma_lhs - 1e-12);
    }
  }
}

TEST_CASE("the unrestricted gamma expectation differs from the hitting-time mean") {
  // K2, q = 2: the forest with a single root has E_d H = 1, probability 1/2,
  // while (1/q) E[n / (|Xd| + 1)] = 0.75 since the two-root forest adds 0.5.
  const auto t = identity_terms(oracle::k2(), 2.0);
  CHECK(t.gamma_lhs == doctest::Approx(0.5));
  CHECK(t.gamma_rhs == doctest::Approx(0.5));
  CHECK(t.gamma_rhs_unrestricted == doctest::Approx(0.75));
}

TEST_CASE("estimate_identities: K2 and 3-path") {
  const auto k2 = estimate_identities(oracle::k2(), 2.0);
  bool found = false;
  for (const auto& r : k2) {
    CAPTURE(r.name);
    CHECK(r.pass);
    if (r.name.find("alpha") != std::string::npos && r.relation == Relation::Equal) {
      CHECK(r.lhs == doctest::Approx(0.5));
      CHECK(r.rhs == doctest::Approx(0.5));
      found = true;
    }
  }
  CHECK(found);
  for (const auto& r : estimate_identities(oracle::path3(), 1.0)) {
    CAPTURE(r.name);
    CHECK(r.pass);
    CHECK(r.samples == 0);
  }
  std::vector<std::tuple<Index, Index, double>> edges;
  for (Index i = 0; i < 5; ++i) edges.emplace_back(i, i + 1, 1.0);
  CHECK_THROWS_AS(estimate_identities(oracle::symmetric_graph(6, edges), 1.0), Error);
}

TEST_CASE("cardinality bounds") {
  const auto k2 = cardinality_bounds(oracle::k2(), 1.0, 0.5, 0, 0);
  REQUIRE(!k2.empty());
  CHECK(k2.front().lhs == doctest::Approx(4.0 / 3.0));
  CHECK(k2.front().rhs == doctest::Approx(1.0));
  for (const auto& r : k2) CHECK(r.pass);

  const auto p3 = oracle::path3();
  const Matrix k = oracle::green(oracle::generator(p3), 1.0);
  double diag_bound = 0;
  for (Index x = 0; x < 3; ++x) diag_bound += 1.0 / (1.0 + p3.exit_rates()(x));
  CHECK(k.trace() >= diag_bound);

  for (const auto& [name, g] : connected_graph_zoo(5, 1))
    for (double q : {0.5, 1.0, 2.0}) {
      const auto e = brute_force(g, q);
      const Matrix kg = oracle::green(oracle::generator(g), q);
      CHECK(kg.trace() == doctest::Approx(e.kept).epsilon(1e-10));
      for (const auto& r : cardinality_bounds(g, q, 0.5, 0, 0)) {
        CAPTURE(r.name);
        CHECK(r.pass);
      }
    }
  for (const auto& r : cardinality_bounds(geometric_graph(60, 2).graph, 0.7, 0.5, 20000, 3)) {
    CAPTURE(r.name);
    CHECK(r.pass);
  }
}

TEST_CASE("tilde estimates") {
  const auto exact = exact_tilde_expectations(oracle::k2(), 2.0);
  CHECK(exact.alpha_tilde == doctest::Approx(0.5));
  const auto mc = mc_tilde_estimates(oracle::k2(), {2.0}, 100000, 5);
  const double se = 2.0 * 0.5 * 0.5 / std::sqrt(100000.0);
  CHECK(std::abs(mc[0].alpha_tilde - 0.5) <= 3 * se);
  CHECK(mc_tilde_estimates(oracle::k2(), {2.0}, 1000, 5)[0].alpha_tilde ==
        mc_tilde_estimates(oracle::k2(), {2.0}, 1000, 5)[0].alpha_tilde);

  const auto g = random_weighted_graph(7, 0.5, 4);
  CHECK(mc_tilde_estimates(g, {1e9}, 100, 1)[0].alpha_tilde == 0.0);
  CHECK(exact_tilde_expectations(g, 0.5).inv_gamma_tilde > exact_tilde_expectations(g, 1.5).inv_gamma_tilde);
}
