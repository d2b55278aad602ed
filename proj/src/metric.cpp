#include "divcut/metric.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "divcut/errors.hpp"

namespace divcut {

namespace {
constexpr double kTol = 1e-9;
}

Metric::Metric(Eigen::MatrixXd distances, MetricCheck check) : d_(std::move(distances)) {
  if (d_.rows() != d_.cols()) throw InvalidArgument("metric matrix must be square");
  const auto n = d_.rows();
  for (Eigen::Index x = 0; x < n; ++x) {
    if (d_(x, x) != 0.0) throw InvalidArgument("metric needs a zero diagonal");
    for (Eigen::Index y = x + 1; y < n; ++y) {
      const double a = d_(x, y), b = d_(y, x);
      if (std::isnan(a) || std::isnan(b) || a < 0.0 || b < 0.0)
        throw InvalidArgument("metric entries must be nonnegative");
      if (a != b && std::abs(a - b) > kTol * std::max(std::abs(a), std::abs(b)))
        throw InvalidArgument("metric matrix is not symmetric at (" + std::to_string(x) + ", " +
                              std::to_string(y) + ")");
      d_(y, x) = a;
    }
  }
  if (check == MetricCheck::Full && triangle_violation(d_) > kTol)
    throw InvalidArgument("metric violates the triangle inequality");
}

bool Metric::has_infinite() const { return !d_.allFinite(); }

double Metric::max_finite() const {
  double best = 0.0;
  for (Eigen::Index i = 0; i < d_.size(); ++i)
    if (std::isfinite(d_.data()[i])) best = std::max(best, d_.data()[i]);
  return best;
}

double triangle_violation(const Eigen::MatrixXd& d) {
  double worst = 0.0;
  const auto n = d.rows();
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index z = x + 1; z < n; ++z)
      for (Eigen::Index y = 0; y < n; ++y) {
        const double lhs = d(x, z), rhs = d(x, y) + d(y, z);
        if (lhs <= rhs) continue;
        if (std::isinf(lhs)) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, (lhs - rhs) / std::max(lhs, 1e-300));
      }
  return worst;
}

Metric finite_completion(const Metric& m) {
  if (!m.has_infinite()) return m;
  double sum = 0.0;
  const auto& d = m.matrix();
  const auto n = d.rows();
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = x + 1; y < n; ++y)
      if (std::isfinite(d(x, y))) sum += d(x, y);
  // any finite distance is at most the sum of all finite ones
  const double far = 1.0 + sum;
  Eigen::MatrixXd out = d.unaryExpr([far](double v) { return std::isfinite(v) ? v : far; });
  return Metric(std::move(out), MetricCheck::Basic);
}

}  // namespace divcut
