#pragma once

#include "qclust/encoding.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qclust {

/// Diagonal effect sum_j w_j |j><j| on the distance register.
template <typename Real>
class BasicEffectOperator {
 public:
  using Weights = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

  /// Arbitrary diagonal effect; weights must be finite and nonnegative.
  static BasicEffectOperator from_weights(Weights weights) {
    if (weights.size() < 2 || (weights.size() & (weights.size() - 1)) != 0) {
      throw std::invalid_argument("effect weights must cover 2^n codes");
    }
    if (!weights.allFinite() || (weights.array() < Real(0)).any()) {
      throw std::invalid_argument("effect weights must be finite and nonnegative");
    }
    return BasicEffectOperator(std::move(weights), std::nullopt, std::nullopt, false);
  }

  static BasicEffectOperator gaussian(Weights weights, Code center, Real delta, bool normalized) {
    return BasicEffectOperator(std::move(weights), center, delta, normalized);
  }

  const Weights& weights() const { return weights_; }
  Real weight(Code j) const { return weights_[static_cast<Eigen::Index>(j)]; }
  Eigen::Index dim() const { return weights_.size(); }
  int width() const { return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(dim())) - 1); }
  std::optional<Code> center() const { return center_; }
  std::optional<Real> delta() const { return delta_; }
  bool normalized() const { return normalized_; }

 private:
  BasicEffectOperator(Weights w, std::optional<Code> c, std::optional<Real> d, bool norm)
      : weights_(std::move(w)), center_(c), delta_(d), normalized_(norm) {}

  Weights weights_;
  std::optional<Code> center_;
  std::optional<Real> delta_;
  bool normalized_;
};

using EffectOperator = BasicEffectOperator<double>;

namespace detail {

inline void check_effect_args(Code center, double delta, int n) {
  if (n < 1 || n > kDefaultMaxQubits) {
    throw std::invalid_argument("effect register width must lie in [1, 24]");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("effect width delta must be positive and finite");
  }
  if (center >= (Code{1} << n)) {
    throw std::out_of_range("effect center " + std::to_string(center) + " outside the " +
                            std::to_string(n) + "-qubit register");
  }
}

}  // namespace detail

/// Gaussian window w_j = exp(-(i-j)^2 / (2 delta^2)) / sqrt(2 pi delta^2) over all 2^n codes.
template <typename Real = double>
BasicEffectOperator<Real> build_effect(Code center, Real delta, int n) {
  detail::check_effect_args(center, static_cast<double>(delta), n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  // evaluated in the log domain so tiny delta does not overflow the prefactor
  const Real log_prefactor = -Real(0.5) * std::log(Real(2) * std::numbers::pi_v<Real>) - std::log(delta);
  typename BasicEffectOperator<Real>::Weights w(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Real d = static_cast<Real>(j) - static_cast<Real>(center);
    w[j] = std::exp(log_prefactor - d * d / (Real(2) * delta * delta));
  }
  return BasicEffectOperator<Real>::gaussian(std::move(w), center, delta, false);
}

/// Largest register width for which the full 2^n x 2^n family is materialized.
inline constexpr int kMaxEffectFamilyWidth = 12;

/// Gaussian family rescaled per code so that sum_i E_i = I exactly.
template <typename Real = double>
std::vector<BasicEffectOperator<Real>> normalize_effect_family(int n, Real delta) {
  if (n < 1 || n > kMaxEffectFamilyWidth) {
    throw std::invalid_argument("effect family width must lie in [1, " +
                                std::to_string(kMaxEffectFamilyWidth) + "]");
  }
  detail::check_effect_args(0, static_cast<double>(delta), n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  // rows: centers i, columns: codes j. The common prefactor cancels, and the
  // diagonal term exp(0) = 1 keeps every column sum >= 1.
  Matrix table(dim, dim);
  const Real denom = Real(2) * delta * delta;
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const Real d = static_cast<Real>(i - j);
      table(i, j) = std::exp(-d * d / denom);
    }
    table.col(j) /= table.col(j).sum();
  }
  std::vector<BasicEffectOperator<Real>> family;
  family.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    family.push_back(BasicEffectOperator<Real>::gaussian(table.row(i).transpose(),
                                                         static_cast<Code>(i), delta, true));
  }
  return family;
}

}  // namespace qclust
