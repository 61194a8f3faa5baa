#include "rsfw/pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rsfw/error.hpp"
#include "rsfw/forest.hpp"
#include "rsfw/kernels.hpp"
#include "rsfw/norms.hpp"
#include "rsfw/rng.hpp"

namespace rsfw {

namespace {

Vector original_mu(const Vector& mu, const std::vector<Index>& ids) {
  Vector out(static_cast<Index>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) out[static_cast<Index>(i)] = mu[ids[i]];
  return out;
}

double subset_mass(const Vector& mu, const std::vector<Index>& members) {
  double total = 0.0;
  for (Index x : members) total += mu[x];
  return total;
}

double root_p(double value, double p) { return p == kInfNorm ? 1.0 : std::pow(value, 1.0 / p); }

void check_levels(const PyramidCoefficients& coeffs, const std::vector<PyramidLevel>& levels) {
  if (coeffs.levels() != static_cast<Index>(levels.size()))
    throw Error(ErrorKind::ShapeMismatch, "coefficient levels differ from the level stack");
  for (std::size_t j = 0; j < levels.size(); ++j) {
    if (coeffs.details[j].size() != levels[j].bank.rbreve.cols())
      throw Error(ErrorKind::ShapeMismatch, "detail vector " + std::to_string(j) + " has the wrong length");
  }
  const Index approx_len = levels.empty() ? -1 : levels.back().bank.rbar.cols();
  if (!levels.empty() && coeffs.approx.size() != approx_len)
    throw Error(ErrorKind::ShapeMismatch, "approximation vector has the wrong length");
}

Vector synthesize(const Vector& approx, const std::vector<Vector>& details, const std::vector<PyramidLevel>& levels,
                  bool with_details) {
  Vector f = approx;
  for (Index j = static_cast<Index>(levels.size()) - 1; j >= 0; --j) {
    Vector next = levels[j].bank.rbar * f;
    if (with_details) next += levels[j].bank.rbreve * details[j];
    f = std::move(next);
  }
  return f;
}

}  // namespace

double q_objective(const WeightedGraph& g, double q, Index samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be at least 1");
  const auto counts = sample_root_counts(g, q, samples, seed);
  const double n = static_cast<double>(g.size());
  double alpha_sum = 0.0;
  double beta_sum = 0.0;
  for (Index r : counts) {
    const double roots = static_cast<double>(r);
    alpha_sum += (n - roots) / (1.0 + roots);
    beta_sum += (n - roots) / roots;
  }
  const double alpha_tilde = q * alpha_sum / static_cast<double>(samples);
  const double inv_beta_tilde = beta_sum / static_cast<double>(samples) / g.alpha();
  return alpha_tilde * inv_beta_tilde;
}

QSelection select_q(const WeightedGraph& g, double theta1, double theta2, Index grid_size, Index samples,
                    std::uint64_t seed) {
  if (g.size() < 2) throw Error(ErrorKind::DegenerateGraph, "q selection needs at least two vertices");
  if (!(theta1 > 0.0) || !(theta2 > theta1)) throw Error(ErrorKind::InvalidArgument, "need 0 < theta1 < theta2");
  if (grid_size < 2) throw Error(ErrorKind::InvalidArgument, "grid size must be at least 2");
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be at least 1");
  if (!(g.alpha() > 0.0)) throw Error(ErrorKind::DegenerateGraph, "graph has no edges");

  QSelection out;
  const double lo = theta1 * g.alpha();
  const double hi = theta2 * g.alpha();
  for (Index k = 0; k < grid_size; ++k) {
    double q = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(grid_size - 1));
    if (k == 0) q = lo;
    if (k == grid_size - 1) q = hi;
    const auto s = derive_seed(seed, static_cast<std::uint64_t>(k));
    out.grid.push_back(q);
    out.seeds.push_back(s);
    out.objective.push_back(q_objective(g, q, samples, s));
  }
  out.best = 0;
  for (Index k = 1; k < grid_size; ++k)
    if (out.objective[k] <= out.objective[out.best]) out.best = k;
  out.q = out.grid[out.best];
  return out;
}

double select_qprime(const CoarseLevel& coarse) {
  if (coarse.dropped.empty()) throw Error(ErrorKind::EmptyComplement, "dropped set is empty");
  const double qprime = 2.0 * coarse.alpha_bar_full * static_cast<double>(coarse.kept.size()) /
                        static_cast<double>(coarse.dropped.size());
  if (!(qprime > 0.0)) throw Error(ErrorKind::NonPositiveParameter, "q' is not positive (coarse generator vanishes)");
  return qprime;
}

Index PyramidCoefficients::coefficient_count() const {
  Index total = approx.size();
  for (const auto& d : details) total += d.size();
  return total;
}

Pyramid build_pyramid(const WeightedGraph& g, const PyramidConfig& config) {
  if (config.min_size < 1) throw Error(ErrorKind::InvalidArgument, "min_size must be at least 1");
  if (config.max_resamples < 0) throw Error(ErrorKind::InvalidArgument, "max_resamples must be nonnegative");

  Pyramid out;
  WeightedGraph current = g;
  std::vector<Index> ids(static_cast<std::size_t>(g.size()));
  std::iota(ids.begin(), ids.end(), Index{0});

  for (Index i = 0;; ++i) {
    if (i >= config.max_levels) {
      out.stop_reason = "max_levels";
      break;
    }
    if (current.size() <= config.min_size) {
      out.stop_reason = "min_size";
      break;
    }
    if (!(current.alpha() > 0.0)) {
      out.stop_reason = "no_edges";
      break;
    }
    const auto level_seed = derive_seed(config.seed, static_cast<std::uint64_t>(i));
    const QSelection sel = select_q(current, config.theta1, config.theta2, config.grid_size, config.samples,
                                    derive_seed(level_seed, 0));

    // a usable draw keeps at least two vertices and drops at least one
    std::vector<Index> roots;
    Index draws = 0;
    bool usable = false;
    while (draws <= config.max_resamples) {
      const auto forest = wilson_sample(current, sel.q, derive_seed(derive_seed(level_seed, 1), draws));
      ++draws;
      roots = forest.roots;
      const auto r = static_cast<Index>(roots.size());
      if (r >= 2 && r < current.size()) {
        usable = true;
        break;
      }
    }
    if (!usable) {
      out.stop_reason = "degenerate_draws";
      break;
    }

    PyramidLevel level;
    level.index = i;
    level.q = sel.q;
    level.draws = draws;
    level.vertex_ids = ids;
    CoarseLevel coarse = schur_complement(current, roots, config.schur);
    if (!(coarse.alpha_bar_full > 0.0)) {
      out.stop_reason = "degenerate_draws";
      break;
    }
    level.qprime = select_qprime(coarse);
    Matrix kernel = green_kernel(current, level.qprime, config.green).kernel;
    if (config.sparsify) {
      level.local_errors = local_errors(coarse, kernel, level.qprime);
      coarse = sparsify(coarse, level.local_errors, config.theta, current.alpha());
      level.theta = config.theta;
    }
    level.bank = build_reconstructors(current, coarse, level.qprime, std::move(kernel));

    std::vector<Index> next_ids;
    next_ids.reserve(coarse.kept.size());
    for (Index k : coarse.kept) next_ids.push_back(ids[k]);
    WeightedGraph next = coarse_graph(coarse);

    level.coarse = std::move(coarse);
    level.graph = std::move(current);
    out.levels.push_back(std::move(level));
    current = std::move(next);
    ids = std::move(next_ids);
  }
  return out;
}

PyramidCoefficients analyze_pyramid(const std::vector<PyramidLevel>& levels, const Vector& f) {
  PyramidCoefficients out;
  Vector current = f;
  if (!levels.empty() && f.size() != levels.front().graph.size())
    throw Error(ErrorKind::DimensionMismatch, "signal length differs from vertex count");
  out.approx_ids.resize(static_cast<std::size_t>(f.size()));
  std::iota(out.approx_ids.begin(), out.approx_ids.end(), Index{0});
  for (const auto& level : levels) {
    AnalysisResult res = analyze(level.bank, current);
    std::vector<Index> dropped_ids;
    for (Index d : level.coarse.dropped) dropped_ids.push_back(level.vertex_ids[d]);
    std::vector<Index> kept_ids;
    for (Index k : level.coarse.kept) kept_ids.push_back(level.vertex_ids[k]);
    out.details.push_back(std::move(res.fbreve));
    out.detail_ids.push_back(std::move(dropped_ids));
    out.kept_ids.push_back(kept_ids);
    out.q.push_back(level.q);
    out.qprime.push_back(level.qprime);
    out.approx_ids = std::move(kept_ids);
    current = std::move(res.fbar);
  }
  out.approx = std::move(current);
  return out;
}

Decomposition decompose(const WeightedGraph& g, const Vector& f, const PyramidConfig& config) {
  if (f.size() != g.size()) throw Error(ErrorKind::DimensionMismatch, "signal length differs from vertex count");
  Decomposition out;
  out.pyramid = build_pyramid(g, config);
  out.coefficients = analyze_pyramid(out.pyramid.levels, f);
  return out;
}

Vector reconstruct_full(const PyramidCoefficients& coeffs, const std::vector<PyramidLevel>& levels) {
  check_levels(coeffs, levels);
  return synthesize(coeffs.approx, coeffs.details, levels, true);
}

Vector approximation(const PyramidCoefficients& coeffs, const std::vector<PyramidLevel>& levels) {
  check_levels(coeffs, levels);
  return synthesize(coeffs.approx, coeffs.details, levels, false);
}

Compressor::Compressor(const PyramidCoefficients& coeffs, const std::vector<PyramidLevel>& levels, Vector reference)
    : coeffs_(&coeffs), levels_(&levels), reference_(std::move(reference)) {
  check_levels(coeffs, levels);
  if (levels.empty()) {
    mu_ = Vector::Constant(reference_.size(), 1.0 / static_cast<double>(std::max<Index>(1, reference_.size())));
    return;
  }
  mu_ = levels.front().graph.mu();
  if (reference_.size() != mu_.size()) throw Error(ErrorKind::DimensionMismatch, "reference signal length differs");

  // prefix = Rbar_0 ... Rbar_{j-1}; dual vectors are the columns of prefix * Rbreve_j
  Matrix prefix = Matrix::Identity(mu_.size(), mu_.size());
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const Matrix dual = prefix * levels[j].bank.rbreve;
    dual_norms_.push_back((mu_.transpose() * dual.cwiseAbs2()).transpose().cwiseSqrt());
    prefix = prefix * levels[j].bank.rbar;
  }

  for (std::size_t j = 0; j < levels.size(); ++j) {
    const Vector& g = coeffs.details[j];
    for (Index s = 0; s < g.size(); ++s) {
      ranking_.push_back({static_cast<Index>(j), s, coeffs.detail_ids[j][s], std::abs(g[s]) * dual_norms_[j][s]});
    }
  }
  std::stable_sort(ranking_.begin(), ranking_.end(),
                   [](const RankedDetail& a, const RankedDetail& b) { return a.score > b.score; });
}

CompressionResult Compressor::compress(double keep_fraction) const {
  if (!(keep_fraction >= 0.0 && keep_fraction <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "keep fraction must lie in [0, 1]");
  const auto& levels = *levels_;
  const auto& coeffs = *coeffs_;

  CompressionResult out;
  out.report.kept_fraction = keep_fraction;
  out.report.detail_count = static_cast<Index>(ranking_.size());
  out.report.kept_count = std::min<Index>(out.report.detail_count,
      static_cast<Index>(std::llround(keep_fraction * static_cast<double>(ranking_.size()))));
  out.report.per_level_kept.assign(levels.size(), 0);

  std::vector<Vector> kept_details;
  for (const auto& d : coeffs.details) kept_details.push_back(Vector::Zero(d.size()));
  for (Index r = 0; r < out.report.kept_count; ++r) {
    const auto& item = ranking_[r];
    kept_details[item.level][item.slot] = coeffs.details[item.level][item.slot];
    ++out.report.per_level_kept[item.level];
  }
  out.signal = levels.empty() ? coeffs.approx : synthesize(coeffs.approx, kept_details, levels, true);
  const double ref = weighted_norm(reference_, mu_, 2.0);
  const double err = weighted_norm(out.signal - reference_, mu_, 2.0);
  out.report.relative_l2_error = ref > 0.0 ? err / ref : err;
  return out;
}

CompressionResult compress(const PyramidCoefficients& coeffs, const std::vector<PyramidLevel>& levels,
                           double keep_fraction) {
  return Compressor(coeffs, levels, reconstruct_full(coeffs, levels)).compress(keep_fraction);
}

JacksonConstants jackson_exact_constants(const std::vector<PyramidLevel>& levels, double p) {
  JacksonConstants c;
  c.p = p;
  for (const auto& level : levels) {
    const Vector& mu = level.graph.mu();
    const auto& coarse = level.coarse;
    const double kept_mass = subset_mass(mu, coarse.kept);
    const double dropped_mass = subset_mass(mu, coarse.dropped);
    const Vector mu_kept = conditioned_measure(mu, coarse.kept);
    const Vector mu_dropped = conditioned_measure(mu, coarse.dropped);

    c.rbar.push_back(root_p(1.0 / kept_mass, p) * operator_norm(level.bank.rbar, mu, mu_kept, p));
    c.rbreve.push_back(root_p(1.0 / dropped_mass, p) * operator_norm(level.bank.rbreve, mu, mu_dropped, p));
    const auto err = intertwining_error(level.bank, level.graph, coarse);
    c.e.push_back(root_p(kept_mass, p) * operator_norm(err.error, mu_kept, mu, p));
  }
  return c;
}

JacksonConstants jackson_bound_constants(const std::vector<PyramidLevel>& levels, double p) {
  JacksonConstants c;
  c.p = p;
  for (const auto& level : levels) {
    const auto& coarse = level.coarse;
    const double a = 1.0 + 2.0 * coarse.alpha_bar / level.qprime;
    const double ab = level.graph.alpha() / coarse.beta;
    const double d = 1.0 + level.qprime / coarse.gamma;
    if (p == kInfNorm) {
      c.rbar.push_back(a);
      c.rbreve.push_back(std::max(ab, d));
      c.e.push_back(2.0 * level.qprime * ab);
    } else if (p == 1.0) {
      c.rbar.push_back(a + ab);
      c.rbreve.push_back(1.0 + d);
      c.e.push_back(2.0 * level.qprime);
    } else {
      c.rbar.push_back(std::sqrt(a * a + ab));
      c.rbreve.push_back(std::sqrt(ab + d * d));
      c.e.push_back(2.0 * level.qprime * std::sqrt(ab));
    }
  }
  return c;
}

namespace {

double jackson_rhs(const std::vector<PyramidLevel>& levels, const JacksonConstants& c, double lf, double f) {
  double rhs = 0.0;
  double prefix = 1.0;
  double errors = 0.0;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    rhs += prefix * c.rbreve[j] / levels[j].qprime * (lf + errors * f);
    prefix *= c.rbar[j];
    errors += c.e[j];
  }
  return rhs;
}

}  // namespace

JacksonResult jackson_bound(const std::vector<PyramidLevel>& levels, const WeightedGraph& g, const Vector& f,
                            const JacksonConstants& exact, const JacksonConstants& bound) {
  const double p = exact.p;
  const PyramidCoefficients coeffs = analyze_pyramid(levels, f);
  JacksonResult out;
  out.lhs = weighted_norm(f - approximation(coeffs, levels), g.mu(), p);
  const double lf = weighted_norm(laplacian_apply(g, f), g.mu(), p);
  const double fn = weighted_norm(f, g.mu(), p);
  out.rhs = jackson_rhs(levels, exact, lf, fn);
  out.rhs_bound = jackson_rhs(levels, bound, lf, fn);
  return out;
}

JacksonResult jackson_bound(const std::vector<PyramidLevel>& levels, const WeightedGraph& g, const Vector& f,
                            double p) {
  return jackson_bound(levels, g, f, jackson_exact_constants(levels, p), jackson_bound_constants(levels, p));
}

std::vector<double> analysis_norms(const std::vector<PyramidLevel>& levels, const Vector& mu, const Vector& f,
                                   double p) {
  std::vector<double> out;
  Vector current = f;
  double detail_part = 0.0;  // sum of mu |g|^p, or running max for p = infinity
  for (const auto& level : levels) {
    const AnalysisResult res = analyze(level.bank, current);
    std::vector<Index> dropped_ids, kept_ids;
    for (Index d : level.coarse.dropped) dropped_ids.push_back(level.vertex_ids[d]);
    for (Index k : level.coarse.kept) kept_ids.push_back(level.vertex_ids[k]);
    const Vector w_dropped = original_mu(mu, dropped_ids);
    const Vector w_kept = original_mu(mu, kept_ids);
    if (p == kInfNorm) {
      detail_part = std::max(detail_part, res.fbreve.size() ? res.fbreve.cwiseAbs().maxCoeff() : 0.0);
      out.push_back(std::max(detail_part, res.fbar.cwiseAbs().maxCoeff()));
    } else {
      detail_part += std::pow(weighted_norm(res.fbreve, w_dropped, p), p);
      out.push_back(std::pow(detail_part + std::pow(weighted_norm(res.fbar, w_kept, p), p), 1.0 / p));
    }
    current = res.fbar;
  }
  return out;
}

}  // namespace rsfw
