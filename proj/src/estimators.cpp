#include "rsfw/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "rsfw/coarsening.hpp"
#include "rsfw/error.hpp"
#include "rsfw/filterbank.hpp"
#include "rsfw/forest.hpp"
#include "rsfw/kernels.hpp"
#include "rsfw/rng.hpp"

namespace rsfw {

namespace {

std::string q_tag(double q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", q);
  return buf;
}

double determinant_of(const Matrix& a) {
  if (a.rows() == 0) return 1.0;
  return a.partialPivLu().determinant();
}

Matrix dense_green(const WeightedGraph& g, double q) {
  return green_kernel(g, q).kernel;
}

}  // namespace

EstimateReport make_report(std::string name, double lhs, double rhs, double tolerance, Index samples,
                           Relation relation) {
  EstimateReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = tolerance;
  r.samples = samples;
  r.relation = relation;
  r.pass = relation == Relation::Equal ? std::abs(lhs - rhs) <= tolerance : lhs >= rhs - tolerance;
  return r;
}

EstimateReport partition_function_check(const WeightedGraph& g, double q) {
  const ForestEnsemble ens = enumerate_forests(g, q);
  Matrix a = -g.dense_laplacian();
  a.diagonal().array() += q;
  const double det = determinant_of(a);
  return make_report("partition_function q=" + q_tag(q), ens.partition_sum, det, 1e-10 * std::abs(det), 0);
}

RootCountLaw root_count_law_exact(const WeightedGraph& g, double q) {
  if (!(q > 0.0)) throw Error(ErrorKind::NonPositiveParameter, "q must be positive");
  const auto spec = spectral_decompose(g);
  const Index n = g.size();
  Vector law = Vector::Zero(n + 1);
  law[0] = 1.0;
  for (Index i = 0; i < n; ++i) {
    // the eigenvalue 0 gives a certain root; clamp roundoff below zero
    const double lambda = std::max(0.0, spec.eigenvalues[i]);
    const double p = i == 0 ? 1.0 : q / (q + lambda);
    for (Index k = i + 1; k >= 1; --k) law[k] = law[k] * (1.0 - p) + law[k - 1] * p;
    law[0] *= (1.0 - p);
  }
  return {law};
}

RootCountLaw root_count_law_mc(const WeightedGraph& g, double q, Index samples, std::uint64_t seed) {
  const auto counts = sample_root_counts(g, q, samples, seed);
  Vector law = Vector::Zero(g.size() + 1);
  for (Index c : counts) law[c] += 1.0;
  if (samples > 0) law /= static_cast<double>(samples);
  return {law};
}

double total_variation(const RootCountLaw& a, const RootCountLaw& b) {
  if (a.probabilities.size() != b.probabilities.size())
    throw Error(ErrorKind::DimensionMismatch, "laws have different supports");
  return 0.5 * (a.probabilities - b.probabilities).cwiseAbs().sum();
}

EstimateReport root_count_check(const WeightedGraph& g, double q, Index samples, std::uint64_t seed,
                                double tolerance) {
  const double tv = total_variation(root_count_law_exact(g, q), root_count_law_mc(g, q, samples, seed));
  return make_report("root_count_tv q=" + q_tag(q), tv, 0.0, tolerance, samples);
}

EstimateReport determinantal_marginal(const WeightedGraph& g, double q, const std::vector<Index>& subset,
                                      Index samples, std::uint64_t seed) {
  if (subset.size() > 3) throw Error(ErrorKind::InvalidArgument, "marginal checks take at most 3 vertices");
  for (Index a : subset)
    if (a < 0 || a >= g.size()) throw Error(ErrorKind::InvalidArgument, "vertex out of range");
  std::string name = "determinantal_marginal q=" + q_tag(q) + " A={";
  for (std::size_t i = 0; i < subset.size(); ++i) name += (i ? "," : "") + std::to_string(subset[i]);
  name += "}";
  if (subset.empty()) return make_report(name, 1.0, 1.0, 0.0, samples);

  const Matrix k = dense_green(g, q);
  const Index m = static_cast<Index>(subset.size());
  Matrix minor(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) minor(i, j) = k(subset[i], subset[j]);
  const double expected = determinant_of(minor);

  const WalkTable table(g);
  Index hits = 0;
  WilsonWorkspace work;
  std::vector<Index> parent;
  for (Index s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    wilson_parents(table, g.size(), q, rng, work, parent);
    bool all = true;
    for (Index a : subset) all = all && parent[a] == kRoot;
    hits += all;
  }
  const double empirical = samples > 0 ? static_cast<double>(hits) / static_cast<double>(samples) : 0.0;
  const double se = samples > 0 ? std::sqrt(expected * (1.0 - expected) / static_cast<double>(samples)) : 0.0;
  return make_report(name, empirical, expected, 3.0 * se, samples);
}

std::vector<EstimateReport> determinantal_marginals(const WeightedGraph& g, double q, Index samples,
                                                    std::uint64_t seed) {
  const Matrix k = dense_green(g, q);
  const auto counts = sample_root_inclusions(g, q, samples, seed);
  const double ns = static_cast<double>(samples);
  std::vector<EstimateReport> out;
  auto report = [&](const std::string& name, double hits, double expected) {
    const double se = std::sqrt(std::max(0.0, expected * (1.0 - expected)) / ns);
    out.push_back(make_report(name, hits / ns, expected, 3.0 * se, samples));
  };
  for (Index x = 0; x < g.size(); ++x)
    report("determinantal_marginal q=" + q_tag(q) + " A={" + std::to_string(x) + "}", counts.singles[x], k(x, x));
  for (Index x = 0; x < g.size(); ++x)
    for (Index y = x + 1; y < g.size(); ++y)
      report("determinantal_marginal q=" + q_tag(q) + " A={" + std::to_string(x) + "," + std::to_string(y) + "}",
             counts.pairs(x, y), k(x, x) * k(y, y) - k(x, y) * k(y, x));
  return out;
}

std::vector<EstimateReport> hitting_identity(const WeightedGraph& g, double q, const std::vector<Index>& starts,
                                             Index samples, std::uint64_t seed) {
  const RootCountLaw law = root_count_law_exact(g, q);
  const double expected = (1.0 - law.probabilities[1]) / q;
  std::vector<SampleMoments> est;
  std::vector<EstimateReport> out;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const auto m = sample_forest_hitting_time(g, q, starts[i], samples, derive_seed(seed, i));
    est.push_back(m);
    out.push_back(make_report("hitting_time q=" + q_tag(q) + " start=" + std::to_string(starts[i]), m.mean, expected,
                              3.0 * m.standard_error, samples));
  }
  for (std::size_t i = 0; i < starts.size(); ++i)
    for (std::size_t j = i + 1; j < starts.size(); ++j) {
      const double se = std::hypot(est[i].standard_error, est[j].standard_error);
      out.push_back(make_report("hitting_time_spread q=" + q_tag(q) + " starts=" + std::to_string(starts[i]) + "," +
                                    std::to_string(starts[j]),
                                est[i].mean, est[j].mean, 3.0 * se, samples));
    }
  return out;
}

IdentityTerms identity_terms(const WeightedGraph& g, double q) {
  const Index n = g.size();
  const double alpha = g.alpha();

  // aggregate forest weights by root set
  std::map<std::vector<Index>, double> by_roots;
  double z = 0.0;
  for_each_forest(g, q, [&](const std::vector<Index>& parent, Index, double weight) {
    std::vector<Index> roots;
    for (Index x = 0; x < n; ++x)
      if (parent[x] == kRoot) roots.push_back(x);
    by_roots[roots] += weight;
    z += weight;
  });

  IdentityTerms t;
  t.gamma_lhs_by_size = Vector::Zero(n + 1);
  t.gamma_rhs_by_size = Vector::Zero(n + 1);
  Vector size_law = Vector::Zero(n + 1);
  for (const auto& [roots, weight] : by_roots) {
    const double p = weight / z;
    const Index kept = static_cast<Index>(roots.size());
    const Index dropped = n - kept;
    const double kd = static_cast<double>(kept);
    const double dd = static_cast<double>(dropped);
    size_law[kept] += p;
    t.alpha_rhs += p * q * dd / (kd + 1.0);
    t.beta_rhs += p * dd / (alpha * kd);
    t.gamma_rhs_unrestricted += p * static_cast<double>(n) / (dd + 1.0) / q;
    if (kept >= 2) t.gamma_rhs += p * static_cast<double>(n) / (dd + 1.0) / q;

    if (dropped == 0) {
      t.alpha_lhs += p * g.exit_rates().mean();
      t.mean_alpha_bar += p * alpha;
      continue;
    }
    const CoarseLevel level = schur_complement(g, roots);
    t.alpha_lhs += p * (-level.generator_full.diagonal()).mean();
    t.mean_alpha_bar += p * level.alpha_bar_full;

    // sum_z P(k, z) E_z H = (1/alpha) sum_d w(k, d) h(d)
    double excursion_sum = 0.0;
    for (Index k : level.kept) {
      double row = 0.0;
      for (Index i = 0; i < dropped; ++i) row += g.rate(k, level.dropped[i]) * level.hitting_times[i];
      excursion_sum += row / alpha;
    }
    t.beta_lhs += p * excursion_sum / kd;
    t.mean_inv_beta += p / level.beta;

    const double h_sum = level.hitting_times.sum();
    t.gamma_lhs += p * h_sum / dd;
    t.gamma_lhs_by_size[kept] += p * h_sum;
    t.mean_inv_gamma += p / level.gamma;
  }
  for (Index m = 1; m < n; ++m) t.gamma_rhs_by_size[m] = static_cast<double>(n) / q * size_law[m + 1];
  return t;
}

std::vector<EstimateReport> estimate_identities(const WeightedGraph& g, double q) {
  if (g.size() > kMaxIdentitySize)
    throw Error(ErrorKind::GraphTooLarge,
                "identity checks are limited to " + std::to_string(kMaxIdentitySize) + " vertices");
  const IdentityTerms t = identity_terms(g, q);
  const std::string tag = " q=" + q_tag(q);
  auto tol = [](double v) { return 1e-10 * std::max(1.0, std::abs(v)); };
  std::vector<EstimateReport> out;
  out.push_back(make_report("alpha_bar_identity" + tag, t.alpha_lhs, t.alpha_rhs, tol(t.alpha_rhs), 0));
  out.push_back(make_report("beta_identity" + tag, t.beta_lhs, t.beta_rhs, tol(t.beta_rhs), 0));
  out.push_back(make_report("gamma_identity" + tag, t.gamma_lhs, t.gamma_rhs, tol(t.gamma_rhs), 0));
  for (Index m = 1; m < g.size(); ++m)
    out.push_back(make_report("gamma_identity_size" + tag + " m=" + std::to_string(m), t.gamma_lhs_by_size[m],
                              t.gamma_rhs_by_size[m], tol(t.gamma_rhs_by_size[m]), 0));
  out.push_back(make_report("alpha_bar_max_vs_mean" + tag, t.mean_alpha_bar, t.alpha_rhs, tol(t.alpha_rhs), 0,
                            Relation::AtLeast));
  out.push_back(make_report("inv_beta_max_vs_mean" + tag, t.mean_inv_beta, t.beta_rhs, tol(t.beta_rhs), 0,
                            Relation::AtLeast));
  out.push_back(make_report("inv_gamma_max_vs_mean" + tag, t.mean_inv_gamma, t.gamma_rhs, tol(t.gamma_rhs), 0,
                            Relation::AtLeast));
  return out;
}

std::vector<EstimateReport> cardinality_bounds(const WeightedGraph& g, double q, double r, Index samples,
                                               std::uint64_t seed) {
  if (!(r > 0.0 && r < 1.0 + 1e-15)) throw Error(ErrorKind::InvalidArgument, "r must lie in (0, 1]");
  const Index n = g.size();
  const double alpha = g.alpha();
  const double nd = static_cast<double>(n);
  const Matrix k = dense_green(g, q);
  std::vector<char> rapid(static_cast<std::size_t>(n), 0);
  Index rapid_count = 0;
  for (Index x = 0; x < n; ++x) {
    rapid[x] = g.exit_rates()[x] >= r * alpha * (1.0 - 1e-12);
    rapid_count += rapid[x];
  }
  const double kept_bound = nd * q / (q + alpha);
  const double rapid_bound = static_cast<double>(rapid_count) * r * alpha / (q + 2.0 * alpha);
  const double dropped_bound = g.exit_rates().sum() / (q + 2.0 * alpha);

  double e_kept = k.trace();
  double e_rapid = 0.0;
  for (Index x = 0; x < n; ++x)
    if (rapid[x]) e_rapid += 1.0 - k(x, x);
  const std::string tag = " q=" + q_tag(q);
  auto slack = [](double v) { return 1e-12 * std::max(1.0, std::abs(v)); };
  std::vector<EstimateReport> out;
  out.push_back(make_report("kept_size_bound" + tag, e_kept, kept_bound, slack(kept_bound), 0, Relation::AtLeast));
  out.push_back(make_report("dropped_size_bound" + tag, nd - e_kept, dropped_bound, slack(dropped_bound), 0,
                            Relation::AtLeast));
  out.push_back(make_report("rapid_dropped_bound" + tag + " r=" + q_tag(r), e_rapid, rapid_bound, slack(rapid_bound), 0,
                            Relation::AtLeast));
  if (samples <= 0) return out;

  const auto counts = sample_root_inclusions(g, q, samples, seed);
  const double ns = static_cast<double>(samples);
  // the batch kernel keeps only the histogram and per-vertex frequencies
  double mean_kept = 0.0, second_kept = 0.0;
  for (Index c = 0; c <= n; ++c) {
    const double f = static_cast<double>(counts.count_histogram[c]) / ns;
    mean_kept += f * static_cast<double>(c);
    second_kept += f * static_cast<double>(c * c);
  }
  const double se_kept = std::sqrt(std::max(0.0, second_kept - mean_kept * mean_kept) / ns);
  double mean_rapid = 0.0;
  for (Index x = 0; x < n; ++x)
    if (rapid[x]) mean_rapid += 1.0 - counts.singles[x] / ns;
  // |Xd cap R_r| lies in [0, |R_r|], so its variance is at most |R_r|^2 / 4
  const double se_rapid = 0.5 * static_cast<double>(rapid_count) / std::sqrt(ns);
  out.push_back(make_report("kept_size_bound_mc" + tag, mean_kept, kept_bound, 3.0 * se_kept, samples,
                            Relation::AtLeast));
  out.push_back(make_report("dropped_size_bound_mc" + tag, nd - mean_kept, dropped_bound, 3.0 * se_kept, samples,
                            Relation::AtLeast));
  out.push_back(make_report("rapid_dropped_bound_mc" + tag + " r=" + q_tag(r), mean_rapid, rapid_bound,
                            3.0 * se_rapid, samples, Relation::AtLeast));
  return out;
}

std::vector<TildeEstimate> mc_tilde_estimates(const WeightedGraph& g, const std::vector<double>& q_grid,
                                              Index samples, std::uint64_t seed) {
  if (q_grid.empty()) throw Error(ErrorKind::InvalidArgument, "q grid is empty");
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be at least 1");
  const double n = static_cast<double>(g.size());
  std::vector<TildeEstimate> out;
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    const double q = q_grid[i];
    if (!(q > 0.0)) throw Error(ErrorKind::NonPositiveParameter, "q grid values must be positive");
    const auto counts = sample_root_counts(g, q, samples, derive_seed(seed, i));
    TildeEstimate t;
    t.q = q;
    for (Index c : counts) {
      const double kept = static_cast<double>(c);
      const double dropped = n - kept;
      t.alpha_tilde += dropped / (1.0 + kept);
      t.inv_beta_tilde += dropped / kept;
      t.inv_gamma_tilde += n / (1.0 + dropped);
    }
    const double s = static_cast<double>(samples);
    t.alpha_tilde *= q / s;
    t.inv_beta_tilde /= s * g.alpha();
    t.inv_gamma_tilde /= s * q;
    out.push_back(t);
  }
  return out;
}

TildeEstimate exact_tilde_expectations(const WeightedGraph& g, double q) {
  const RootCountLaw law = root_count_law_exact(g, q);
  const Index n = g.size();
  const double nd = static_cast<double>(n);
  TildeEstimate t;
  t.q = q;
  for (Index k = 1; k <= n; ++k) {
    const double p = law.probabilities[k];
    const double kept = static_cast<double>(k);
    const double dropped = nd - kept;
    t.alpha_tilde += p * q * dropped / (1.0 + kept);
    t.inv_beta_tilde += p * dropped / (kept * g.alpha());
    t.inv_gamma_tilde += p * nd / (q * (1.0 + dropped));
  }
  return t;
}

}  // namespace rsfw
