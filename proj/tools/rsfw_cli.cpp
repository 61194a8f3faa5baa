#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rsfw/error.hpp"
#include "rsfw/estimators.hpp"
#include "rsfw/generators.hpp"
#include "rsfw/io.hpp"
#include "rsfw/norms.hpp"
#include "rsfw/pyramid.hpp"
#include "rsfw/rng.hpp"
#include "rsfw/validation.hpp"

namespace {

struct RunConfig {
  std::string graph;
  std::string mu;
  std::string signal;
  std::string out;
  std::string recon_out;
  std::string signal_out;
  std::string kind = "path";
  std::string signal_kind = "none";
  rsfw::Index n = 1024;
  rsfw::Index rows = 32;
  rsfw::Index cols = 32;
  double radius = 0.0;
  rsfw::Index levels = 64;
  rsfw::Index min_size = 16;
  double theta1 = 0.125;
  double theta2 = 1.0;
  double theta = 4.0;
  bool sparsify = false;
  double keep = 0.1;
  rsfw::Index grid = 16;
  rsfw::Index samples = 1;
  std::uint64_t seed = 0;
  rsfw::Index max_n = 5;
};

rsfw::PyramidConfig pyramid_config(const RunConfig& rc) {
  rsfw::PyramidConfig c;
  c.max_levels = rc.levels;
  c.min_size = rc.min_size;
  c.theta1 = rc.theta1;
  c.theta2 = rc.theta2;
  c.theta = rc.theta;
  c.sparsify = rc.sparsify;
  c.grid_size = rc.grid;
  c.samples = rc.samples;
  c.seed = rc.seed;
  return c;
}

std::string to_text(const auto& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
  } else {
    rsfw::write_file(path, contents);
  }
}

void log_levels(const rsfw::Pyramid& pyr) {
  std::cerr << std::setprecision(10);
  for (const auto& level : pyr.levels) {
    const auto err = rsfw::intertwining_error(level.bank, level.graph, level.coarse);
    std::cerr << "level=" << level.index << " n=" << level.graph.size() << " q=" << level.q
              << " qprime=" << level.qprime << " kept=" << level.coarse.kept_size()
              << " dropped=" << level.coarse.dropped_size() << " alpha=" << level.graph.alpha()
              << " alpha_bar=" << level.coarse.alpha_bar_full << " alpha_bar_s=" << level.coarse.alpha_bar
              << " beta=" << level.coarse.beta << " gamma=" << level.coarse.gamma
              << " intertwining_inf=" << err.norm_inf << " draws=" << level.draws
              << " sparsified=" << (level.coarse.sparsified ? 1 : 0) << '\n';
  }
  std::cerr << "stop=" << pyr.stop_reason << '\n';
}

struct Loaded {
  rsfw::WeightedGraph graph;
  rsfw::Vector signal;
};

Loaded load_inputs(const RunConfig& rc) {
  Loaded in{rsfw::load_graph(rc.graph, rc.mu), {}};
  in.signal = rsfw::read_vector_file(rc.signal);
  if (in.signal.size() != in.graph.size())
    throw rsfw::Error(rsfw::ErrorKind::DimensionMismatch, "signal length differs from vertex count");
  return in;
}

int run_gen(const RunConfig& rc) {
  rsfw::WeightedGraph g;
  if (rc.kind == "path") {
    g = rsfw::path_graph(rc.n);
  } else if (rc.kind == "cycle") {
    g = rsfw::cycle_graph(rc.n);
  } else if (rc.kind == "grid") {
    g = rsfw::grid_graph(rc.rows, rc.cols);
  } else if (rc.kind == "geometric") {
    g = rsfw::geometric_graph(rc.n, rc.seed, rc.radius).graph;
  } else {
    throw rsfw::Error(rsfw::ErrorKind::InvalidArgument, "unknown graph kind " + rc.kind);
  }
  emit(rc.out, to_text([&](std::ostream& os) { rsfw::write_graph(os, g); }));
  if (rc.signal_kind != "none") {
    rsfw::Vector s;
    if (rc.signal_kind == "piecewise") {
      if (rc.kind != "path") throw rsfw::Error(rsfw::ErrorKind::InvalidArgument, "the piecewise signal lives on a path");
      s = rsfw::piecewise_regular_signal(g.size()).values;
    } else if (rc.signal_kind == "sign-e1") {
      s = rsfw::sign_first_mode(g);
    } else {
      throw rsfw::Error(rsfw::ErrorKind::InvalidArgument, "unknown signal kind " + rc.signal_kind);
    }
    if (rc.signal_out.empty()) throw rsfw::Error(rsfw::ErrorKind::InvalidArgument, "--signal-out is required with --signal-kind");
    emit(rc.signal_out, to_text([&](std::ostream& os) { rsfw::write_vector(os, s); }));
  }
  return 0;
}

int run_analyze(const RunConfig& rc) {
  const Loaded in = load_inputs(rc);
  const auto dec = rsfw::decompose(in.graph, in.signal, pyramid_config(rc));
  log_levels(dec.pyramid);
  emit(rc.out, to_text([&](std::ostream& os) { rsfw::write_coefficients(os, dec.coefficients); }));
  const rsfw::Vector rec = rsfw::reconstruct_full(dec.coefficients, dec.pyramid.levels);
  const double scale = std::max(1e-300, in.signal.cwiseAbs().maxCoeff());
  std::cerr << "coefficients=" << dec.coefficients.coefficient_count()
            << " reconstruction_rel_inf=" << (rec - in.signal).cwiseAbs().maxCoeff() / scale << '\n';
  if (!rc.recon_out.empty()) emit(rc.recon_out, to_text([&](std::ostream& os) { rsfw::write_vector(os, rec); }));
  return 0;
}

int run_compress(const RunConfig& rc) {
  const Loaded in = load_inputs(rc);
  const auto dec = rsfw::decompose(in.graph, in.signal, pyramid_config(rc));
  log_levels(dec.pyramid);
  const rsfw::Compressor compressor(dec.coefficients, dec.pyramid.levels, in.signal);
  std::vector<rsfw::CurvePoint> curve;
  for (double f : {0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0})
    curve.push_back({f, compressor.compress(f).report.relative_l2_error});
  const auto chosen = compressor.compress(rc.keep);
  std::cerr << "keep=" << rc.keep << " kept_count=" << chosen.report.kept_count
            << " detail_count=" << chosen.report.detail_count
            << " relative_l2_error=" << chosen.report.relative_l2_error << '\n';
  emit(rc.out, to_text([&](std::ostream& os) { rsfw::write_compression_curve(os, curve); }));
  if (!rc.signal_out.empty())
    emit(rc.signal_out, to_text([&](std::ostream& os) { rsfw::write_vector(os, chosen.signal); }));
  return 0;
}

int run_tune(const RunConfig& rc) {
  const rsfw::WeightedGraph g = rsfw::load_graph(rc.graph, rc.mu);
  const auto sel = rsfw::select_q(g, rc.theta1, rc.theta2, rc.grid, rc.samples, rc.seed);
  const auto tilde = rsfw::mc_tilde_estimates(g, sel.grid, rc.samples, rc.seed);
  std::ostringstream os;
  os << "q,objective,alpha_tilde,inv_beta_tilde,inv_gamma_tilde\n" << std::setprecision(17);
  for (std::size_t k = 0; k < sel.grid.size(); ++k)
    os << sel.grid[k] << ',' << sel.objective[k] << ',' << tilde[k].alpha_tilde << ',' << tilde[k].inv_beta_tilde << ','
       << tilde[k].inv_gamma_tilde << '\n';
  emit(rc.out, os.str());
  std::cerr << "selected_q=" << sel.q << " alpha=" << g.alpha() << '\n';
  return 0;
}

int run_validate(const RunConfig& rc) {
  const auto report = rsfw::run_validation(rc.max_n, rc.samples, rc.seed);
  emit(rc.out, to_text([&](std::ostream& os) { rsfw::write_validation_report(os, report.records); }));
  std::cerr << "checks=" << report.records.size() << " failures=" << report.failures << '\n';
  return report.all_pass ? 0 : 1;
}

void add_pipeline_flags(CLI::App* cmd, RunConfig& rc, bool needs_signal) {
  cmd->add_option("--graph", rc.graph, "graph file (`n m` header, then `u v w` lines)")->required();
  cmd->add_option("--mu", rc.mu, "measure file, one value per line");
  if (needs_signal) cmd->add_option("--signal", rc.signal, "signal file, one value per line")->required();
  cmd->add_option("--levels", rc.levels, "maximum number of levels")->check(CLI::PositiveNumber);
  cmd->add_option("--min-size", rc.min_size, "stop once a level has at most this many vertices")->check(CLI::PositiveNumber);
  cmd->add_option("--theta1", rc.theta1, "lower end of the q range, in units of alpha");
  cmd->add_option("--theta2", rc.theta2, "upper end of the q range, in units of alpha");
  cmd->add_option("--theta", rc.theta, "sparsification error level")->check(CLI::Range(1.0, 1e300));
  cmd->add_flag("--sparsify", rc.sparsify, "sparsify coarse generators");
  cmd->add_option("--grid", rc.grid, "q grid size")->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--samples", rc.samples, "forests per q grid point")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", rc.seed, "64-bit seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiresolution analysis of graph signals with random spanning forests"};
  app.require_subcommand(1);
  RunConfig rc;

  auto* gen = app.add_subcommand("gen", "generate a benchmark graph and optional signal");
  gen->add_option("--kind", rc.kind, "path | cycle | grid | geometric")
      ->check(CLI::IsMember({"path", "cycle", "grid", "geometric"}));
  gen->add_option("--n", rc.n, "vertex count (path, cycle, geometric)");
  gen->add_option("--rows", rc.rows, "grid rows");
  gen->add_option("--cols", rc.cols, "grid columns");
  gen->add_option("--radius", rc.radius, "geometric connection radius (0 = default)");
  gen->add_option("--seed", rc.seed, "64-bit seed");
  gen->add_option("--out", rc.out, "graph output file (default stdout)");
  gen->add_option("--signal-kind", rc.signal_kind, "none | piecewise | sign-e1")
      ->check(CLI::IsMember({"none", "piecewise", "sign-e1"}));
  gen->add_option("--signal-out", rc.signal_out, "signal output file");

  auto* analyze = app.add_subcommand("analyze", "decompose a signal and write its coefficients");
  add_pipeline_flags(analyze, rc, true);
  analyze->add_option("--out", rc.out, "coefficients file (default stdout)");
  analyze->add_option("--recon-out", rc.recon_out, "reconstructed signal file");

  auto* compress = app.add_subcommand("compress", "compression curve by normalized-detail thresholding");
  add_pipeline_flags(compress, rc, true);
  compress->add_option("--keep", rc.keep, "fraction of detail coefficients kept")->check(CLI::Range(0.0, 1.0));
  compress->add_option("--out", rc.out, "curve CSV (default stdout)");
  compress->add_option("--signal-out", rc.signal_out, "compressed signal at --keep");

  auto* tune = app.add_subcommand("tune", "q grid objective table for the first level");
  add_pipeline_flags(tune, rc, false);
  tune->add_option("--out", rc.out, "table CSV (default stdout)");

  auto* validate = app.add_subcommand("validate", "run the identity and bound checks over the graph zoo");
  validate->add_option("--max-n", rc.max_n, "largest zoo graph")->check(CLI::Range(2, 6));
  validate->add_option("--samples", rc.samples, "Monte Carlo samples (0 = exact checks only)");
  validate->add_option("--seed", rc.seed, "64-bit seed");
  validate->add_option("--out", rc.out, "report file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(rc);
    if (analyze->parsed()) return run_analyze(rc);
    if (compress->parsed()) return run_compress(rc);
    if (tune->parsed()) return run_tune(rc);
    if (validate->parsed()) {
      if (validate->count("--samples") == 0) rc.samples = 0;
      return run_validate(rc);
    }
  } catch (const rsfw::Error& e) {
    std::cerr << nlohmann::json{{"error", rsfw::to_string(e.kind())}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  }
  return 0;
}
