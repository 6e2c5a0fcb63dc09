#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace qclust {

/// Row-major point cloud: one row per point, one column per attribute.
template <typename Scalar>
using PointMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Points = PointMatrix<double>;

/// Minkowski order p >= 1, or the Chebyshev (p -> infinity) limit.
class Metric {
 public:
  static Metric minkowski(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
      throw std::invalid_argument("Minkowski order must satisfy p >= 1, got " + std::to_string(p));
    }
    return Metric(p, false);
  }
  static Metric manhattan() { return Metric(1.0, false); }
  static Metric euclidean() { return Metric(2.0, false); }
  static Metric chebyshev() { return Metric(std::numeric_limits<double>::infinity(), true); }

  double p() const { return p_; }
  bool is_chebyshev() const { return chebyshev_; }
  bool is_euclidean() const { return !chebyshev_ && p_ == 2.0; }

  std::string name() const {
    if (chebyshev_) return "chebyshev";
    if (p_ == 1.0) return "manhattan";
    if (p_ == 2.0) return "euclidean";
    return "minkowski:" + std::to_string(p_);
  }

  friend bool operator==(const Metric&, const Metric&) = default;

 private:
  Metric(double p, bool chebyshev) : p_(p), chebyshev_(chebyshev) {}
  double p_;
  bool chebyshev_;
};

/// L_p distance between two points given as Eigen vectors (rows or columns).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar minkowski_distance(const Eigen::MatrixBase<DerivedA>& x,
                                             const Eigen::MatrixBase<DerivedB>& y,
                                             const Metric& metric) {
  using Scalar = typename DerivedA::Scalar;
  if (x.size() != y.size()) {
    throw std::invalid_argument("minkowski_distance: dimension mismatch (" +
                                std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() == 0) return Scalar(0);
  const auto diff = (x.derived().reshaped() - y.derived().reshaped()).array().abs();
  if (metric.is_chebyshev()) return diff.maxCoeff();
  if (metric.p() == 1.0) return diff.sum();
  if (metric.p() == 2.0) return std::sqrt(diff.square().sum());
  const Scalar p = static_cast<Scalar>(metric.p());
  return std::pow(diff.pow(p).sum(), Scalar(1) / p);
}

struct FarthestPair {
  std::size_t first;
  std::size_t second;
  double distance;
};

/// Exhaustive all-pairs scan; ties resolve to the lexicographically smallest (i, j).
template <typename Derived>
FarthestPair farthest_pair(const Eigen::MatrixBase<Derived>& points, const Metric& metric) {
  const Eigen::Index count = points.rows();
  if (count < 2) {
    throw std::invalid_argument("farthest_pair needs at least 2 points, got " + std::to_string(count));
  }
  FarthestPair best{0, 1, -1.0};
  for (Eigen::Index i = 0; i < count; ++i) {
    for (Eigen::Index j = i + 1; j < count; ++j) {
      const double d = static_cast<double>(minkowski_distance(points.row(i), points.row(j), metric));
      if (d > best.distance) {
        best = {static_cast<std::size_t>(i), static_cast<std::size_t>(j), d};
      }
    }
  }
  return best;
}

}  // namespace qclust
