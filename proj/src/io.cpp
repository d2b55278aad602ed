#include "divcut/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace divcut {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed document: ") + e.what());
  }
}

std::vector<int> parse_members(const json& j, const char* what) {
  if (!j.is_array()) throw IoError(std::string(what) + " must be an array of node ids");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw IoError(std::string(what) + " must hold integers");
    out.push_back(v.get<int>());
  }
  return out;
}

Hypergraph parse_edges(const json& doc, const char* key, int n) {
  Hypergraph h(n);
  if (!doc.contains(key)) return h;
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw IoError(std::string(key) + " must be an array");
  for (const auto& rec : arr) {
    if (!rec.is_object() || !rec.contains("edge")) throw IoError(std::string(key) + " records need an \"edge\" field");
    double w = 1.0;
    if (rec.contains("w")) {
      if (!rec.at("w").is_number()) throw IoError("edge weight must be a number");
      w = rec.at("w").get<double>();
    }
    try {
      h.add_edge(parse_members(rec.at("edge"), "edge"), w);
    } catch (const InvalidArgument& e) {
      throw IoError(std::string(key) + ": " + e.what());
    }
  }
  return h;
}

void write_edges(std::ostringstream& out, const Hypergraph& h) {
  if (h.num_edges() == 0) {
    out << "[]";
    return;
  }
  out << "[\n";
  for (std::size_t i = 0; i < h.num_edges(); ++i) {
    const auto& e = h.edge(i);
    out << "    {\"edge\": [";
    for (std::size_t k = 0; k < e.members.size(); ++k) out << (k ? ", " : "") << e.members[k];
    out << "], \"w\": " << format_number(e.weight) << '}' << (i + 1 < h.num_edges() ? ",\n" : "\n");
  }
  out << "  ]";
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Instance parse_instance(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("nodes") || !doc.at("nodes").is_number_integer())
    throw IoError("instance needs an integer \"nodes\" field");
  const int n = doc.at("nodes").get<int>();
  if (n < 2) throw IoError("instance needs at least 2 nodes");
  try {
    return make_instance(parse_edges(doc, "supply", n), parse_edges(doc, "demand", n));
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("invalid instance: ") + e.what());
  }
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "{\n  \"nodes\": " << inst.num_nodes() << ",\n  \"supply\": ";
  write_edges(out, inst.supply);
  out << ",\n  \"demand\": ";
  write_edges(out, inst.demand);
  out << "\n}\n";
  return out.str();
}

Metric parse_metric(const std::string& text) {
  std::istringstream in(text);
  int n = 0;
  if (!(in >> n) || n < 1) throw IoError("metric file must start with a positive size");
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(in >> d(i, j))) throw IoError("metric file is missing entries");
  std::string extra;
  if (in >> extra) throw IoError("metric file has trailing content");
  try {
    return Metric(d);
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("invalid metric: ") + e.what());
  }
}

std::string serialize_metric(const Metric& m) {
  std::ostringstream out;
  out << m.size() << '\n';
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) out << (j ? " " : "") << format_number(m(i, j));
    out << '\n';
  }
  return out.str();
}

TableFile parse_table(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("nodes") || !doc.at("nodes").is_number_integer())
    throw IoError("table needs an integer \"nodes\" field");
  TableFile t;
  t.nodes = doc.at("nodes").get<int>();
  if (t.nodes < 1 || t.nodes > 64) throw IoError("table supports 1..64 nodes");
  if (!doc.contains("values") || !doc.at("values").is_array()) throw IoError("table needs a \"values\" array");
  for (const auto& rec : doc.at("values")) {
    if (!rec.is_object() || !rec.contains("set") || !rec.contains("value") || !rec.at("value").is_number())
      throw IoError("table records need \"set\" and numeric \"value\"");
    std::uint64_t mask = 0;
    for (int v : parse_members(rec.at("set"), "set")) {
      if (v < 0 || v >= t.nodes) throw IoError("table set member out of range");
      mask |= std::uint64_t{1} << v;
    }
    t.values[mask] = rec.at("value").get<double>();
  }
  return t;
}

std::string serialize_points(const Eigen::MatrixXd& points) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) out << (j ? " " : "") << format_number(points(i, j));
    out << '\n';
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("cannot write " + path);
}

}  // namespace divcut
