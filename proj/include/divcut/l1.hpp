#pragma once

#include <span>

#include <Eigen/Dense>

namespace divcut {

/// l1 diversity of a point set: sum over coordinates of the coordinate range.
/// Rows of `points` are points; `rows` selects the set.
template <typename Derived>
typename Derived::Scalar l1_diversity(const Eigen::MatrixBase<Derived>& points,
                                      std::span<const int> rows) {
  using Scalar = typename Derived::Scalar;
  if (rows.size() < 2) return Scalar(0);
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> lo = points.row(rows[0]);
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> hi = lo;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    lo = lo.cwiseMin(points.row(rows[k]));
    hi = hi.cwiseMax(points.row(rows[k]));
  }
  return (hi - lo).sum();
}

/// l1 distance between two rows.
template <typename Derived>
typename Derived::Scalar l1_distance(const Eigen::MatrixBase<Derived>& points, int x, int y) {
  return (points.row(x) - points.row(y)).cwiseAbs().sum();
}

/// Diameter of the selected rows under an arbitrary distance matrix.
template <typename Derived>
typename Derived::Scalar diameter(const Eigen::MatrixBase<Derived>& distances,
                                  std::span<const int> rows) {
  using Scalar = typename Derived::Scalar;
  Scalar best(0);
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b)
      best = std::max<Scalar>(best, distances(rows[a], rows[b]));
  return best;
}

}  // namespace divcut
