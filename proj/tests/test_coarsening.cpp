#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "rsfw/coarsening.hpp"
#include "rsfw/error.hpp"
#include "rsfw/filterbank.hpp"
#include "rsfw/generators.hpp"
#include "rsfw/io.hpp"
#include "rsfw/rng.hpp"
#include "rsfw/zoo.hpp"

using namespace rsfw;

namespace {

std::vector<Index> random_subset(Index n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Index> s;
  while (s.empty() || static_cast<Index>(s.size()) == n) {
    s.clear();
    for (Index x = 0; x < n; ++x)
      if (rng.uniform() < 0.45) s.push_back(x);
  }
  return s;
}

}  // namespace

TEST_CASE("schur_complement: 3-path keeping the endpoints") {
  const auto c = schur_complement(oracle::path3(), {0, 2});
  Matrix expected(2, 2);
  expected << -0.5, 0.5, 0.5, -0.5;
  CHECK(oracle::max_abs(c.generator - expected) <= 1e-14);
  CHECK(c.alpha_bar == doctest::Approx(0.5));
  CHECK(c.gamma == doctest::Approx(2.0));
  CHECK(c.beta == doctest::Approx(4.0));
  CHECK(c.dropped == std::vector<Index>{1});
}

TEST_CASE("schur_complement: K2 keeping one vertex is the zero generator") {
  const auto c = schur_complement(oracle::k2(), {0});
  CHECK(c.generator.rows() == 1);
  CHECK(c.generator(0, 0) == 0.0);
  CHECK(c.alpha_bar == 0.0);
}

TEST_CASE("schur_complement: 3-path keeping {0, 1}") {
  const auto c = schur_complement(oracle::path3(), {1, 0});
  CHECK(c.kept == std::vector<Index>{0, 1});
  CHECK(c.green_dropped(0, 0) == doctest::Approx(1.0));
  CHECK(c.gamma == doctest::Approx(1.0));
}

TEST_CASE("schur_complement: errors") {
  const auto g = oracle::path3();
  auto kind = [&](std::vector<Index> kept) {
    try {
      schur_complement(g, kept);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  CHECK(kind({}) == ErrorKind::EmptyKeptSet);
  CHECK(kind({0, 1, 2}) == ErrorKind::FullKeptSet);
  CHECK_THROWS_AS(schur_complement(g, {0, 0}), Error);
  CHECK_THROWS_AS(schur_complement(g, {0, 7}), Error);
}

TEST_CASE("neumann_inverse examples") {
  CHECK(neumann_inverse(oracle::path3(), {1}, 1e-14, 10)(0, 0) == doctest::Approx(0.5));
  CHECK(neumann_inverse(oracle::k2(), {1}, 1e-12, 100000)(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  const auto g = random_weighted_graph(7, 0.5, 4);
  for (Index x = 0; x < 7; ++x)
    CHECK(neumann_inverse(g, {x}, 1e-14, 1000000)(0, 0) == doctest::Approx(1.0 / g.exit_rates()(x)).epsilon(1e-10));
  CHECK_THROWS_AS(neumann_inverse(g, {1, 2, 3, 4, 5}, 1e-16, 3), Error);
}

TEST_CASE("neumann_inverse: partial sums stay below the exact inverse") {
  const auto g = random_weighted_graph(8, 0.4, 9);
  const std::vector<Index> dropped{1, 2, 5, 6};
  const Matrix l = oracle::generator(g);
  const Matrix exact = (-oracle::block(l, dropped, dropped)).inverse();
  const Matrix approx = neumann_inverse(g, dropped, 1e-14, 1000000);
  CHECK((approx.array() <= exact.array() + 1e-14).all());
  CHECK(oracle::max_abs(approx - exact) <= 1e-10 * oracle::max_abs(exact));
  const Matrix rough = neumann_inverse(g, dropped, 1e-3, 1000000);
  CHECK((rough.array() <= exact.array() + 1e-14).all());
}

TEST_CASE("schur_complement invariants against the dense oracle") {
  Index cases = 0;
  for (const auto& [name, g] : connected_graph_zoo(6, 4)) {
    if (g.size() < 3) continue;
    for (std::uint64_t t = 0; t < 3; ++t) {
      const auto kept = random_subset(g.size(), derive_seed(cases, t));
      CAPTURE(name);
      const auto c = schur_complement(g, kept);
      const Matrix l = oracle::generator(g);
      const Matrix lbar = oracle::schur(l, kept);
      const double ab = c.alpha_bar;
      CHECK(oracle::max_abs(c.generator - lbar) <= 1e-10 * std::max(1.0, ab));
      CHECK(c.alpha_bar == doctest::Approx((-lbar.diagonal()).maxCoeff()));

      Matrix off = c.generator;
      off.diagonal().setZero();
      CHECK(off.minCoeff() >= -1e-12 * ab);
      CHECK(c.generator.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10 * std::max(ab, 1e-300));
      const Matrix flux = c.mu_bar.asDiagonal() * c.generator;
      CHECK(oracle::max_abs(flux - flux.transpose()) <= 1e-10 * ab * oracle::max_abs(c.generator) + 1e-300);

      const auto fine = oracle::spectrum(l);
      const auto coarse = oracle::spectrum(lbar);
      CHECK(coarse.front() >= fine.front() - 1e-8);
      CHECK(coarse.back() <= fine.back() + 1e-8);

      const auto dropped = oracle::complement(g.size(), kept);
      const Matrix gd = (-oracle::block(l, dropped, dropped)).inverse();
      CHECK((c.green_dropped.array() >= 0).all());
      CHECK(oracle::max_abs(c.green_dropped - gd) <= 1e-10 * oracle::max_abs(gd));
      const Vector h = gd.rowwise().sum();
      CHECK(1.0 / c.gamma == doctest::Approx(h.maxCoeff()).epsilon(1e-10));
      double excursion = 0;
      for (std::size_t i = 0; i < kept.size(); ++i) {
        double s = 0;
        for (std::size_t j = 0; j < dropped.size(); ++j) s += g.rate(kept[i], dropped[j]) * h(j);
        excursion = std::max(excursion, s);
      }
      CHECK(1.0 / c.beta == doctest::Approx(excursion / g.alpha()).epsilon(1e-10));
      ++cases;
    }
  }
  CHECK(cases > 50);
}

TEST_CASE("schur_complement: dense and Neumann paths agree") {
  const auto g = random_weighted_graph(10, 0.4, 2);
  const std::vector<Index> kept{0, 3, 7};
  SchurOptions opt;
  opt.dense_threshold = 0;
  const auto series = schur_complement(g, kept, opt);
  const auto dense = schur_complement(g, kept);
  CHECK(oracle::max_abs(series.generator - dense.generator) <= 1e-10);
  CHECK(series.beta == doctest::Approx(dense.beta).epsilon(1e-9));
  CHECK(series.gamma == doctest::Approx(dense.gamma).epsilon(1e-9));
}

TEST_CASE("schur_complement: dropping one vertex gives the star-mesh formula") {
  const auto g = random_weighted_graph(6, 0.6, 31);
  const Matrix l = oracle::generator(g);
  for (Index d = 0; d < 6; ++d) {
    std::vector<Index> kept;
    for (Index x = 0; x < 6; ++x)
      if (x != d) kept.push_back(x);
    const auto c = schur_complement(g, kept);
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (std::size_t j = 0; j < kept.size(); ++j) {
        const double expected = l(kept[i], kept[j]) + l(kept[i], d) * l(d, kept[j]) / g.exit_rates()(d);
        CHECK(std::abs(c.generator(i, j) - expected) <= 1e-12 * g.alpha());
      }
  }
}

TEST_CASE("local_errors examples") {
  const auto k2 = oracle::k2();
  const auto c = schur_complement(k2, {0});
  CHECK(local_errors(c, k2, 2.0)(0) == doctest::Approx(1.0));

  const auto p3 = oracle::path3();
  const auto cp = schur_complement(p3, {0, 2});
  const Matrix l = oracle::generator(p3);
  const Matrix k = oracle::green(l, 1.0);
  const Matrix lam = oracle::block(k, {0, 2}, {0, 1, 2});
  const Matrix diff = oracle::block(Matrix(k * l), {0, 2}, {0, 1, 2}) - cp.generator * lam;
  const Vector eps = local_errors(cp, p3, 1.0);
  for (Index i = 0; i < 2; ++i) CHECK(eps(i) == doctest::Approx(diff.row(i).cwiseAbs().sum()).epsilon(1e-10));
  CHECK(diff.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);

  const auto g = random_weighted_graph(9, 0.4, 6);
  const auto cg = schur_complement(g, {1, 4, 5, 8});
  const Matrix lg = oracle::generator(g);
  const Matrix kg = oracle::green(lg, 0.8);
  std::vector<Index> all(9);
  for (Index x = 0; x < 9; ++x) all[x] = x;
  const Matrix dg = oracle::block(Matrix(kg * lg), cg.kept, all) - cg.generator * oracle::block(kg, cg.kept, all);
  CHECK(dg.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
  const Vector eg = local_errors(cg, green_kernel(g, 0.8).kernel, 0.8);
  CHECK(oracle::max_abs(eg - Vector(dg.cwiseAbs().rowwise().sum())) <= 1e-10);
}

TEST_CASE("sparsify examples") {
  const auto g = random_weighted_graph(9, 0.6, 1);
  const auto c = schur_complement(g, {0, 2, 4, 6});
  const auto same = sparsify(c, Vector::Zero(4), 4.0, g.alpha());
  CHECK(same.generator == c.generator);
  CHECK(!same.sparsified);

  const auto p = schur_complement(oracle::path3(), {0, 2});
  const auto zero = sparsify(p, Vector::Constant(2, 1e6), 1.0, 2.0);
  CHECK(oracle::max_abs(zero.generator) == 0.0);
  CHECK(zero.sparsified);
  CHECK(!zero.connected);
  CHECK(zero.alpha_bar == 0.0);
  CHECK(zero.alpha_bar_full == doctest::Approx(0.5));
  CHECK_THROWS_AS(sparsify(p, Vector::Zero(2), 0.5, 2.0), Error);
  CHECK_THROWS_AS(sparsify(p, Vector::Constant(2, -1.0), 4.0, 2.0), Error);
}

TEST_CASE("sparsify respects the per-row budget and keeps a generator") {
  Index removed_total = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto g = t % 2 ? random_weighted_graph(14, 0.5, t) : geometric_graph(40, t).graph;
    const auto kept = random_subset(g.size(), 100 + t);
    const auto c = schur_complement(g, kept);
    const double qp = 2 * c.alpha_bar_full * c.kept_size() / c.dropped_size();
    const Vector eps = local_errors(c, g, qp);
    for (double theta : {1.0, 2.0, 4.0, 8.0}) {
      const auto s = sparsify(c, eps, theta, g.alpha());
      const Matrix diff = (c.generator - s.generator).cwiseAbs();
      for (Index i = 0; i < c.kept_size(); ++i)
        CHECK(diff.row(i).sum() <= eps(i) * c.alpha_bar / (theta * g.alpha()) * (1 + 1e-12) + 1e-15);
      CHECK(s.generator.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10 * std::max(c.alpha_bar, 1e-300));
      const Matrix flux = s.mu_bar.asDiagonal() * s.generator;
      CHECK(oracle::max_abs(flux - flux.transpose()) <= 1e-12 * std::max(c.alpha_bar, 1e-300));
      Matrix off = s.generator;
      off.diagonal().setZero();
      CHECK(off.minCoeff() >= 0.0);
      for (Index i = 0; i < off.rows(); ++i)
        for (Index j = 0; j < off.cols(); ++j) {
          if (off(i, j) != 0.0) CHECK(off(i, j) == c.generator(i, j));
          if (off(i, j) == 0.0 && c.generator(i, j) > 0.0 && i != j) ++removed_total;
        }
    }
  }
  CHECK(removed_total > 0);
}

TEST_CASE("coarse_graph carries mu_bar and the rates") {
  const auto g = random_weighted_graph(8, 0.5, 13);
  const auto c = schur_complement(g, {0, 1, 5});
  const auto cg = coarse_graph(c);
  CHECK(cg.size() == 3);
  CHECK(oracle::max_abs(cg.mu() - c.mu_bar) <= 1e-15);
  CHECK(oracle::max_abs(cg.dense_laplacian() - c.generator) <= 1e-12 * c.alpha_bar);
  CHECK(cg.alpha() == doctest::Approx(c.alpha_bar));

  std::ostringstream os;
  write_coarse_generator(os, c);
  CHECK(os.str().find("3 ") == 0);
}
