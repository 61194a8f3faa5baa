#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rsfw/coarsening.hpp"
#include "rsfw/error.hpp"
#include "rsfw/filterbank.hpp"
#include "rsfw/generators.hpp"
#include "rsfw/norms.hpp"
#include "rsfw/rng.hpp"
#include "rsfw/zoo.hpp"

using namespace rsfw;

namespace {

struct Config {
  WeightedGraph g;
  CoarseLevel level;
  FilterBank bank;
};

Config random_config(std::uint64_t seed) {
  Rng rng(seed);
  const Index n = 5 + static_cast<Index>(rng.uniform() * 20);
  auto g = seed % 3 == 0 ? geometric_graph(n + 20, seed).graph : random_weighted_graph(n, 0.3 + 0.4 * rng.uniform(), seed);
  std::vector<Index> kept;
  while (kept.empty() || static_cast<Index>(kept.size()) == g.size()) {
    kept.clear();
    for (Index x = 0; x < g.size(); ++x)
      if (rng.uniform() < 0.5) kept.push_back(x);
  }
  auto level = schur_complement(g, kept);
  const double qprime = std::exp(std::log(0.05 * g.alpha()) + rng.uniform() * std::log(200.0));
  auto bank = build_reconstructors(g, level, qprime);
  return {std::move(g), std::move(level), std::move(bank)};
}

double mass(const Vector& mu, const std::vector<Index>& s) {
  double m = 0;
  for (Index x : s) m += mu(x);
  return m;
}

Vector restrict(const Vector& f, const std::vector<Index>& s) {
  Vector out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out(i) = f(s[i]);
  return out;
}

}  // namespace

TEST_CASE("green_kernel examples") {
  const Matrix k = green_kernel(oracle::k2(), 2.0).kernel;
  Matrix expected(2, 2);
  expected << 0.75, 0.25, 0.25, 0.75;
  CHECK(oracle::max_abs(k - expected) <= 1e-14);
  CHECK(k(0, 0) >= 2.0 / 3.0);

  const auto g = random_weighted_graph(10, 0.4, 3);
  const double huge = 1e9;
  const Matrix kid = green_kernel(g, huge).kernel;
  CHECK(oracle::max_abs(kid - Matrix::Identity(10, 10)) <= 3 * g.alpha() / huge);

  CHECK_THROWS_AS(green_kernel(g, 0.0), Error);
  CHECK_THROWS_AS(green_kernel(g, -1.0), Error);
}

TEST_CASE("green_kernel invariants and diagonal bounds") {
  auto graphs = connected_graph_zoo(5, 6);
  graphs.push_back({"grid", grid_graph(6, 7)});
  graphs.push_back({"geometric", geometric_graph(80, 5).graph});
  for (const auto& [name, g] : graphs) {
    CAPTURE(name);
    for (double q : {0.1, 1.0, 3.0}) {
      const Matrix k = green_kernel(g, q).kernel;
      const Matrix ref = oracle::green(oracle::generator(g), q);
      CHECK(oracle::max_abs(k - ref) <= 1e-10);
      CHECK(k.minCoeff() >= -1e-14);
      CHECK((k.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-10);
      const Matrix flux = g.mu().asDiagonal() * k;
      CHECK(oracle::max_abs(flux - flux.transpose()) <= 1e-10 * oracle::max_abs(flux));
      for (Index x = 0; x < g.size(); ++x) {
        const double w = g.exit_rates()(x);
        CHECK(k(x, x) >= q / (q + w) - 1e-12);
        CHECK(1 - k(x, x) >= w / (q + 2 * g.alpha()) - 1e-12);
      }
    }
  }
}

TEST_CASE("green_kernel: Chebyshev approximation") {
  const auto g = grid_graph(8, 8);
  const Matrix exact = green_kernel(g, 2.0).kernel;
  GreenOptions opt;
  opt.method = GreenMethod::Chebyshev;
  opt.degree = 40;
  const auto cheb = green_kernel(g, 2.0, opt);
  CHECK(oracle::max_abs(cheb.kernel - exact) <= 1e-8);
  CHECK(cheb.row_sum_error <= 1e-8);
  opt.degree = 2;
  CHECK_THROWS_AS(green_kernel(g, 0.05, opt), Error);
}

TEST_CASE("analyze / reconstruct: K2 hand values") {
  const auto g = oracle::k2();
  const auto level = schur_complement(g, {0});
  const auto bank = build_reconstructors(g, level, 2.0);
  CHECK(bank.rbar(0, 0) == doctest::Approx(1.0));
  CHECK(bank.rbar(1, 0) == doctest::Approx(1.0));
  CHECK(bank.rbreve(0, 0) == doctest::Approx(1.0));
  CHECK(bank.rbreve(1, 0) == doctest::Approx(-3.0));
  Vector f(2);
  f << 1, 0;
  const auto a = analyze(bank, f);
  CHECK(a.fbar(0) == doctest::Approx(0.75));
  CHECK(a.fbreve(0) == doctest::Approx(0.25));
  const Vector r = reconstruct(bank, a);
  CHECK(r(0) == doctest::Approx(1.0));
  CHECK(std::abs(r(1)) <= 1e-14);
  CHECK_THROWS_AS(analyze(bank, Vector::Zero(3)), Error);
  CHECK_THROWS_AS(reconstruct(bank, AnalysisResult{Vector::Zero(2), Vector::Zero(1)}), Error);
}

TEST_CASE("build_reconstructors matches the block formulas") {
  const auto g = oracle::path3();
  const auto level = schur_complement(g, {0, 2});
  const auto bank = build_reconstructors(g, level, 1.0);
  const Matrix l = oracle::generator(g);
  const std::vector<Index> k{0, 2}, d{1};
  const Matrix gd = (-oracle::block(l, d, d)).inverse();
  const Matrix lbar = oracle::schur(l, k);
  Matrix rbar(3, 2), rbreve(3, 1);
  const Matrix top = Matrix::Identity(2, 2) - lbar / 1.0;
  const Matrix bottom = gd * oracle::block(l, d, k);
  rbar.row(0) = top.row(0);
  rbar.row(2) = top.row(1);
  rbar.row(1) = bottom.row(0);
  const Matrix rtop = oracle::block(l, k, d) * gd;
  rbreve.row(0) = rtop.row(0);
  rbreve.row(2) = rtop.row(1);
  rbreve(1, 0) = -1.0 - gd(0, 0);
  CHECK(oracle::max_abs(bank.rbar - rbar) <= 1e-14);
  CHECK(oracle::max_abs(bank.rbreve - rbreve) <= 1e-14);
  CHECK(std::abs((bank.rbar.row(1) * Vector::Ones(2))(0) - 1.0) <= 1e-14);
}

TEST_CASE("filter bank invariants on random configurations") {
  for (std::uint64_t s = 0; s < 25; ++s) {
    const auto c = random_config(s);
    const Index n = c.g.size();
    CAPTURE(s);
    for (std::uint64_t t = 0; t < 20; ++t) {
      const Vector f = oracle::random_signal(n, 1000 * s + t);
      const Vector r = reconstruct(c.bank, analyze(c.bank, f));
      CHECK((r - f).cwiseAbs().maxCoeff() <= 1e-9 * f.cwiseAbs().maxCoeff());
    }
    const auto ca = analyze(c.bank, Vector::Constant(n, -2.5));
    CHECK((ca.fbar.array() + 2.5).abs().maxCoeff() <= 1e-12);
    CHECK(ca.fbreve.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((reconstruct(c.bank, ca).array() + 2.5).abs().maxCoeff() <= 1e-10);

    Matrix hit(c.level.dropped_size(), c.level.kept_size());
    for (std::size_t i = 0; i < c.level.dropped.size(); ++i) hit.row(i) = c.bank.rbar.row(c.level.dropped[i]);
    CHECK((hit.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-10);

    const Vector f = oracle::random_signal(n, 77 + s);
    const auto a = analyze(c.bank, f);
    Vector stacked(n);
    for (std::size_t i = 0; i < c.level.kept.size(); ++i) stacked(c.level.kept[i]) = a.fbar(i);
    for (std::size_t i = 0; i < c.level.dropped.size(); ++i) stacked(c.level.dropped[i]) = a.fbreve(i);
    for (double p : {1.0, 2.0, kInfNorm})
      CHECK(oracle::norm(stacked, c.g.mu(), p) <= 2 * oracle::norm(f, c.g.mu(), p) * (1 + 1e-12));
  }
}

TEST_CASE("analysis bound on the 3-path") {
  const auto g = oracle::path3();
  const auto bank = build_reconstructors(g, schur_complement(g, {0, 2}), 1.0);
  for (std::uint64_t t = 0; t < 50; ++t) {
    const Vector f = oracle::random_signal(3, t);
    const auto a = analyze(bank, f);
    const double u = std::max(a.fbar.cwiseAbs().maxCoeff(), a.fbreve.cwiseAbs().maxCoeff());
    CHECK(u <= 2 * f.cwiseAbs().maxCoeff());
    CHECK((reconstruct(bank, a) - f).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("wavelet functions") {
  const auto g = oracle::k2();
  const auto bank = build_reconstructors(g, schur_complement(g, {0}), 2.0);
  const auto w = wavelet_functions(bank, g);
  CHECK(w.scaling(0, 0) == doctest::Approx(1.5));
  CHECK(w.scaling(0, 1) == doctest::Approx(0.5));
  CHECK(w.wavelets(0, 0) == doctest::Approx(0.5));
  CHECK(w.wavelets(0, 1) == doctest::Approx(-0.5));
  CHECK(w.rank == 2);

  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto c = random_config(s);
    const auto wf = wavelet_functions(c.bank, c.g);
    const Vector& mu = c.g.mu();
    CHECK(wf.rank == c.g.size());
    CHECK(std::isfinite(wf.log_abs_det));
    for (Index i = 0; i < wf.wavelets.rows(); ++i) {
      const Index x = c.level.dropped[i];
      CHECK(std::abs(wf.wavelets.row(i).dot(mu)) <= 1e-10);
      CHECK(wf.wavelets.row(i).cwiseAbs().dot(mu) == doctest::Approx(2 * (1 - c.bank.kernel(x, x))).epsilon(1e-10));
    }
    for (Index i = 0; i < wf.scaling.rows(); ++i) CHECK(wf.scaling.row(i).dot(mu) == doctest::Approx(1.0));
  }

  const auto sharp = build_reconstructors(g, schur_complement(g, {0}), 1e9);
  const auto ws = wavelet_functions(sharp, g);
  CHECK(ws.scaling(0, 0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(std::abs(ws.scaling(0, 1)) <= 1e-8);
}

TEST_CASE("intertwining error") {
  const auto g = oracle::k2();
  const auto level = schur_complement(g, {0});
  const auto e = intertwining_error(build_reconstructors(g, level, 2.0), g, level);
  CHECK(e.error(0, 0) == doctest::Approx(0.5));
  CHECK(e.error(0, 1) == doctest::Approx(-0.5));
  CHECK(e.norm_inf == doctest::Approx(1.0));
  CHECK(level.beta == doctest::Approx(1.0));
  CHECK(e.norm_inf <= 2 * 2.0 * g.alpha() / level.beta);

  const auto p = oracle::path3();
  const auto lp = schur_complement(p, {0, 2});
  const auto ep = intertwining_error(build_reconstructors(p, lp, 1.0), p, lp);
  CHECK(ep.formula_gap <= 1e-10);

  const auto r = random_weighted_graph(9, 0.4, 8);
  const auto lr = schur_complement(r, {0, 1, 4, 6});
  const double small = intertwining_error(build_reconstructors(r, lr, 1e-3), r, lr).norm_inf;
  const double smaller = intertwining_error(build_reconstructors(r, lr, 1e-4), r, lr).norm_inf;
  CHECK(small / smaller == doctest::Approx(10.0).epsilon(0.01));
  CHECK(smaller <= 1e-3);
}

TEST_CASE("operator-norm bounds hold on random configurations") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto c = random_config(s + 500);
    CAPTURE(s);
    const Vector& mu = c.g.mu();
    const auto& kept = c.level.kept;
    const auto& dropped = c.level.dropped;
    const double mk = mass(mu, kept), md = mass(mu, dropped);
    const Vector muk = conditioned_measure(mu, kept), mud = conditioned_measure(mu, dropped);
    const double qp = c.bank.qprime;
    const double a = 1 + 2 * c.level.alpha_bar / qp;
    const double ab = c.g.alpha() / c.level.beta;
    const double d = 1 + qp / c.level.gamma;
    const auto err = intertwining_error(c.bank, c.g, c.level);
    CHECK(err.formula_gap <= 1e-9 * std::max(1.0, oracle::max_abs(err.error)));
    CHECK(err.norm_inf <= 2 * qp * ab * (1 + 1e-10));

    for (double p : {1.0, 2.0, kInfNorm}) {
      CAPTURE(p);
      const double rp = std::isinf(p) ? 1.0 : p;
      auto root = [&](double v) { return std::isinf(p) ? 1.0 : std::pow(v, 1.0 / rp); };
      double rbar_b, rbreve_b, e_b;
      if (std::isinf(p)) {
        rbar_b = a, rbreve_b = std::max(ab, d), e_b = 2 * qp * ab;
      } else if (p == 1.0) {
        rbar_b = a + ab, rbreve_b = 1 + d, e_b = 2 * qp;
      } else {
        rbar_b = std::sqrt(a * a + ab), rbreve_b = std::sqrt(ab + d * d), e_b = 2 * qp * std::sqrt(ab);
      }
      const double tol = 1 + 1e-9;
      CHECK(root(1 / mk) * operator_norm(c.bank.rbar, mu, muk, p) <= rbar_b * tol);
      CHECK(root(1 / md) * operator_norm(c.bank.rbreve, mu, mud, p) <= rbreve_b * tol);
      CHECK(root(mk) * operator_norm(err.error, muk, mu, p) <= e_b * tol);

      for (std::uint64_t t = 0; t < 5; ++t) {
        const Vector f = oracle::random_signal(c.g.size(), 31 * s + t);
        const Vector fb = restrict(f, kept), fd = restrict(f, dropped);
        CHECK(oracle::norm(c.bank.rbar * fb, mu, p) <= root(mk) * rbar_b * oracle::norm(fb, muk, p) * tol);
        CHECK(oracle::norm(c.bank.rbreve * fd, mu, p) <= root(md) * rbreve_b * oracle::norm(fd, mud, p) * tol);
        const Vector detail = analyze(c.bank, f).fbreve;
        double kmax = 0;
        for (Index x = 0; x < c.g.size(); ++x) {
          double s2 = 0;
          for (Index y : dropped) s2 += c.bank.kernel(x, y);
          kmax = std::max(kmax, s2);
        }
        const Vector lf = laplacian_apply(c.g, f);
        CHECK(oracle::norm(detail, mud, p) <= root(kmax) / (qp * root(md)) * oracle::norm(lf, mu, p) * tol);
      }
    }
  }
}
