// Serial versus OpenMP timings for the Monte Carlo and linear-solve kernels.
#include <omp.h>

#include <chrono>
#include <cstdio>

#include "rsfw/filterbank.hpp"
#include "rsfw/generators.hpp"
#include "rsfw/kernels.hpp"

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-28s serial %8.3f s  parallel %8.3f s  speedup %5.2fx  identical=%s\n", name, serial, parallel,
              serial / parallel, same ? "yes" : "NO");
}

}  // namespace

int main() {
  std::printf("threads=%d\n", omp_get_max_threads());
  const rsfw::WeightedGraph grid = rsfw::grid_graph(64, 64);

  {
    std::vector<rsfw::Index> a, b;
    const double s = seconds([&] { a = rsfw::sample_root_counts(grid, 0.5, 2000, 7, rsfw::Execution::Serial); });
    const double p = seconds([&] { b = rsfw::sample_root_counts(grid, 0.5, 2000, 7, rsfw::Execution::Parallel); });
    report("wilson root counts", s, p, a == b);
  }
  {
    rsfw::RootInclusionCounts a, b;
    const auto small = rsfw::grid_graph(12, 12);
    const double s = seconds([&] { a = rsfw::sample_root_inclusions(small, 1.0, 20000, 3, rsfw::Execution::Serial); });
    const double p = seconds([&] { b = rsfw::sample_root_inclusions(small, 1.0, 20000, 3, rsfw::Execution::Parallel); });
    report("root inclusion counts", s, p, a.pairs == b.pairs && a.singles == b.singles);
  }
  {
    const auto g = rsfw::grid_graph(40, 40);
    rsfw::SparseMatrix s = -g.laplacian();
    for (rsfw::Index i = 0; i < s.rows(); ++i) s.coeffRef(i, i) += 1.0;
    const rsfw::Matrix rhs = rsfw::Matrix::Identity(s.rows(), s.cols());
    rsfw::Matrix a, b;
    const double ts = seconds([&] { a = rsfw::solve_spd_columns(s, rhs, rsfw::Execution::Serial); });
    const double tp = seconds([&] { b = rsfw::solve_spd_columns(s, rhs, rsfw::Execution::Parallel); });
    report("green kernel column solves", ts, tp, a == b);
  }
  {
    const auto k = rsfw::green_kernel(grid, 1.0).kernel;
    rsfw::Vector a, b;
    const double s = seconds([&] { a = rsfw::row_abs_sums(k, rsfw::Execution::Serial); });
    const double p = seconds([&] { b = rsfw::row_abs_sums(k, rsfw::Execution::Parallel); });
    report("row absolute sums", s, p, a == b);
  }
  return 0;
}
