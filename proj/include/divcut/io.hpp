#pragma once

#include <map>
#include <string>

#include <Eigen/Dense>

#include "divcut/diversity.hpp"
#include "divcut/errors.hpp"
#include "divcut/hypergraph.hpp"
#include "divcut/metric.hpp"

namespace divcut {

/// Reading or writing a file failed, or its content does not parse.
class IoError : public Error {
 public:
  using Error::Error;
};

/// {"nodes": n, "supply": [{"edge": [..], "w": x}, ...], "demand": [...]}
Instance parse_instance(const std::string& text);
/// Canonical text: one edge per line, sorted members, numbers in %.12g.
std::string serialize_instance(const Instance& inst);

/// n followed by n*n whitespace-separated entries.
Metric parse_metric(const std::string& text);
std::string serialize_metric(const Metric& m);

/// {"nodes": n, "values": [{"set": [..], "value": v}, ...]}; the key of each
/// entry is the set's bitmask (n <= 64).
struct TableFile {
  int nodes = 0;
  std::map<std::uint64_t, double> values;
};
TableFile parse_table(const std::string& text);

/// One row per point, columns separated by single spaces.
std::string serialize_points(const Eigen::MatrixXd& points);

/// %.12g
std::string format_number(double x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace divcut
