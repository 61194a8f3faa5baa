#include "rsfw/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "rsfw/error.hpp"

namespace rsfw {

namespace {

using nlohmann::json;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  return in;
}

bool next_data_line(std::istream& in, std::string& line, Index& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void parse_fail(Index line_no, const std::string& what) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

constexpr int kDigits = 17;

}  // namespace

GraphFile parse_graph(std::istream& in) {
  GraphFile out;
  std::string line;
  Index line_no = 0;
  if (!next_data_line(in, line, line_no)) parse_fail(line_no, "missing header `n m`");
  Index m = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> out.n >> m) || out.n < 1 || m < 0) parse_fail(line_no, "bad header, expected `n m`");
  }
  for (Index e = 0; e < m; ++e) {
    if (!next_data_line(in, line, line_no)) parse_fail(line_no, "expected " + std::to_string(m) + " edge lines");
    std::istringstream ls(line);
    RateEntry r;
    if (!(ls >> r.from >> r.to >> r.rate)) parse_fail(line_no, "expected `u v w`");
    out.entries.push_back(r);
  }
  return out;
}

GraphFile read_graph_file(const std::string& path) {
  auto in = open_input(path);
  return parse_graph(in);
}

void write_graph(std::ostream& out, const WeightedGraph& g) {
  out << g.size() << ' ' << g.rates().nonZeros() << '\n' << std::setprecision(kDigits);
  for (Index x = 0; x < g.size(); ++x)
    for (SparseMatrix::InnerIterator it(g.rates(), x); it; ++it) out << x << ' ' << it.col() << ' ' << it.value() << '\n';
}

Vector parse_vector(std::istream& in) {
  std::vector<double> values;
  std::string line;
  Index line_no = 0;
  while (next_data_line(in, line, line_no)) {
    std::istringstream ls(line);
    double v;
    if (!(ls >> v)) parse_fail(line_no, "expected a decimal value");
    values.push_back(v);
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

Vector read_vector_file(const std::string& path) {
  auto in = open_input(path);
  return parse_vector(in);
}

void write_vector(std::ostream& out, const Vector& v) {
  out << std::setprecision(kDigits);
  for (Index i = 0; i < v.size(); ++i) out << v[i] << '\n';
}

WeightedGraph load_graph(const std::string& graph_path, const std::string& measure_path) {
  const GraphFile file = read_graph_file(graph_path);
  std::optional<Vector> mu;
  if (!measure_path.empty()) mu = read_vector_file(measure_path);
  return build_graph(file.n, file.entries, mu);
}

void write_coefficients(std::ostream& out, const PyramidCoefficients& coeffs) {
  json doc;
  doc["format"] = "rsfw-coefficients";
  doc["levels"] = json::array();
  for (Index j = 0; j < coeffs.levels(); ++j) {
    json rec;
    rec["level"] = j;
    rec["q"] = coeffs.q[j];
    rec["qprime"] = coeffs.qprime[j];
    rec["kept_vertex_ids"] = coeffs.kept_ids[j];
    rec["detail_vertex_ids"] = coeffs.detail_ids[j];
    rec["detail_values"] = std::vector<double>(coeffs.details[j].data(), coeffs.details[j].data() + coeffs.details[j].size());
    doc["levels"].push_back(rec);
  }
  json approx;
  approx["level"] = coeffs.levels();
  approx["kept_vertex_ids"] = coeffs.approx_ids;
  approx["approx_values"] = std::vector<double>(coeffs.approx.data(), coeffs.approx.data() + coeffs.approx.size());
  doc["approximation"] = approx;
  out << doc.dump(1) << '\n';
}

PyramidCoefficients parse_coefficients(std::istream& in) {
  PyramidCoefficients c;
  try {
    const json doc = json::parse(in);
    auto to_vector = [](const json& a) {
      const auto v = a.get<std::vector<double>>();
      return Vector(Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size())));
    };
    for (const auto& rec : doc.at("levels")) {
      c.q.push_back(rec.at("q").get<double>());
      c.qprime.push_back(rec.at("qprime").get<double>());
      c.kept_ids.push_back(rec.at("kept_vertex_ids").get<std::vector<Index>>());
      c.detail_ids.push_back(rec.at("detail_vertex_ids").get<std::vector<Index>>());
      c.details.push_back(to_vector(rec.at("detail_values")));
    }
    const auto& approx = doc.at("approximation");
    c.approx_ids = approx.at("kept_vertex_ids").get<std::vector<Index>>();
    c.approx = to_vector(approx.at("approx_values"));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("coefficients file: ") + e.what());
  }
  return c;
}

void write_compression_curve(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "kept_fraction,relative_l2_error\n" << std::setprecision(kDigits);
  for (const auto& p : curve) out << p.kept_fraction << ',' << p.relative_l2_error << '\n';
}

std::vector<CurvePoint> parse_compression_curve(std::istream& in) {
  std::vector<CurvePoint> out;
  std::string line;
  Index line_no = 0;
  bool header = true;
  while (next_data_line(in, line, line_no)) {
    if (header) {
      header = false;
      if (line.rfind("kept_fraction", 0) == 0) continue;
    }
    CurvePoint p;
    char comma = 0;
    std::istringstream ls(line);
    if (!(ls >> p.kept_fraction >> comma >> p.relative_l2_error) || comma != ',')
      parse_fail(line_no, "expected `kept_fraction,relative_l2_error`");
    out.push_back(p);
  }
  return out;
}

void write_validation_report(std::ostream& out, const std::vector<ValidationRecord>& records) {
  json doc = json::array();
  for (const auto& r : records) {
    doc.push_back({{"graph", r.graph},
                   {"name", r.report.name},
                   {"lhs", r.report.lhs},
                   {"rhs", r.report.rhs},
                   {"tolerance", r.report.tolerance},
                   {"relation", r.report.relation == Relation::Equal ? "equal" : "at_least"},
                   {"samples", r.report.samples},
                   {"pass", r.report.pass}});
  }
  out << doc.dump(1) << '\n';
}

std::vector<ValidationRecord> parse_validation_report(std::istream& in) {
  std::vector<ValidationRecord> out;
  try {
    for (const auto& rec : json::parse(in)) {
      ValidationRecord r;
      r.graph = rec.at("graph").get<std::string>();
      r.report.name = rec.at("name").get<std::string>();
      r.report.lhs = rec.at("lhs").get<double>();
      r.report.rhs = rec.at("rhs").get<double>();
      r.report.tolerance = rec.at("tolerance").get<double>();
      r.report.relation = rec.at("relation").get<std::string>() == "equal" ? Relation::Equal : Relation::AtLeast;
      r.report.samples = rec.at("samples").get<Index>();
      r.report.pass = rec.at("pass").get<bool>();
      out.push_back(r);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("validation report: ") + e.what());
  }
  return out;
}

void write_coarse_generator(std::ostream& out, const CoarseLevel& level) {
  const Matrix& l = level.generator;
  Index count = 0;
  for (Index i = 0; i < l.rows(); ++i)
    for (Index j = 0; j < l.cols(); ++j) count += (i != j && l(i, j) > 0.0);
  out << l.rows() << ' ' << count << '\n' << std::setprecision(kDigits);
  for (Index i = 0; i < l.rows(); ++i)
    for (Index j = 0; j < l.cols(); ++j)
      if (i != j && l(i, j) > 0.0) out << i << ' ' << j << ' ' << l(i, j) << '\n';
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << contents;
}

}  // namespace rsfw
