#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qclust {

template <typename Scalar>
struct SymmetricEigen {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;                // descending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // columns match `values`
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric matrix until the off-diagonal Frobenius
/// norm drops below tol * ||A||_F.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                      typename Derived::Scalar tol = 1e-12,
                                                      int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (input.rows() != input.cols()) throw std::invalid_argument("jacobi_eigen needs a square matrix");
  const Eigen::Index dim = input.rows();
  Matrix a = input;
  if (!a.isApprox(a.transpose(), Scalar(1e-10)) && a.norm() > Scalar(0)) {
    throw std::invalid_argument("jacobi_eigen needs a symmetric matrix");
  }
  Matrix v = Matrix::Identity(dim, dim);

  const Scalar total = a.norm();
  auto off_norm = [&] {
    Scalar s = 0;
    for (Eigen::Index p = 0; p < dim; ++p)
      for (Eigen::Index q = p + 1; q < dim; ++q) s += 2 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < max_sweeps && off_norm() > tol * total; ++sweep) {
    for (Eigen::Index p = 0; p < dim - 1; ++p) {
      for (Eigen::Index q = p + 1; q < dim; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (2 * apq);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1));
        const Scalar c = 1 / std::sqrt(t * t + 1);
        const Scalar s = t * c;
        for (Eigen::Index k = 0; k < dim; ++k) {
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < dim; ++k) {
          const Scalar apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < dim; ++k) {
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });
  SymmetricEigen<Scalar> out;
  out.values.resize(dim);
  out.vectors.resize(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    out.values[i] = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  out.sweeps = sweep;
  return out;
}

}  // namespace qclust
