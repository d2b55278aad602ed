#pragma once

#include <Eigen/Dense>

namespace divcut {

enum class MetricCheck {
  Full,  // symmetry, zero diagonal, nonnegativity and triangle inequality
  Basic, // everything except the O(n^3) triangle scan
};

/// Finite pseudo-metric stored as a dense symmetric matrix. Entries may be
/// +inf to mark unreachable pairs (see metric_closure).
class Metric {
 public:
  Metric() = default;
  explicit Metric(Eigen::MatrixXd distances, MetricCheck check = MetricCheck::Full);

  int size() const { return static_cast<int>(d_.rows()); }
  double operator()(int x, int y) const { return d_(x, y); }
  const Eigen::MatrixXd& matrix() const { return d_; }

  bool has_infinite() const;
  /// Largest finite entry.
  double max_finite() const;

 private:
  Eigen::MatrixXd d_;
};

/// Largest relative violation of d(x,z) <= d(x,y) + d(y,z); 0 when the triangle inequality holds.
double triangle_violation(const Eigen::MatrixXd& d);

/// Replaces +inf entries by one constant larger than every finite path length,
/// which keeps the triangle inequality.
Metric finite_completion(const Metric& m);

}  // namespace divcut
