#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rsfw/coarsening.hpp"
#include "rsfw/estimators.hpp"
#include "rsfw/graph.hpp"
#include "rsfw/pyramid.hpp"

namespace rsfw {

/// Graph file: first line `n m`, then m lines `u v w`.
struct GraphFile {
  Index n = 0;
  std::vector<RateEntry> entries;
};

GraphFile parse_graph(std::istream& in);
GraphFile read_graph_file(const std::string& path);
/// Writes every positive rate w(u, v) as its own line.
void write_graph(std::ostream& out, const WeightedGraph& g);

/// One decimal per line.
Vector parse_vector(std::istream& in);
Vector read_vector_file(const std::string& path);
void write_vector(std::ostream& out, const Vector& v);

/// Loads a graph and optional measure file; an empty measure path means the
/// rates must be symmetric and mu uniform.
WeightedGraph load_graph(const std::string& graph_path, const std::string& measure_path = {});

void write_coefficients(std::ostream& out, const PyramidCoefficients& coeffs);
PyramidCoefficients parse_coefficients(std::istream& in);

struct CurvePoint {
  double kept_fraction = 0.0;
  double relative_l2_error = 0.0;
};

void write_compression_curve(std::ostream& out, const std::vector<CurvePoint>& curve);
std::vector<CurvePoint> parse_compression_curve(std::istream& in);

struct ValidationRecord {
  std::string graph;
  EstimateReport report;
};

void write_validation_report(std::ostream& out, const std::vector<ValidationRecord>& records);
std::vector<ValidationRecord> parse_validation_report(std::istream& in);

/// Coarse generator in the graph file format (off-diagonal rates only).
void write_coarse_generator(std::ostream& out, const CoarseLevel& level);

/// Writes to a file, throwing InvalidArgument if it cannot be opened.
void write_file(const std::string& path, const std::string& contents);

}  // namespace rsfw
