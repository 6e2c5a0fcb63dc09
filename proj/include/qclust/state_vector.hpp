#pragma once

#include "qclust/effect.hpp"
#include "qclust/encoding.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qclust {

/// n distance qubits followed by m ancillae. Basis index = (code << m) | label, i.e.
/// |code> (x) |label> with qubit n-1 the most significant distance qubit and
/// ancilla m-1 the most significant ancilla.
struct RegisterLayout {
  int n = 1;
  int m = 0;

  int total() const { return n + m; }
  std::uint64_t dim() const { return std::uint64_t{1} << total(); }
  std::uint64_t index(Code code, Code label) const { return (code << m) | label; }
  Code code_of(std::uint64_t index) const { return index >> m; }
  Code label_of(std::uint64_t index) const { return index & ((Code{1} << m) - 1); }

  void validate(int max_qubits = kDefaultMaxQubits) const {
    if (n < 1) throw std::invalid_argument("distance register needs at least one qubit");
    if (m < 0) throw std::invalid_argument("ancilla count cannot be negative");
    if (n + m > max_qubits) {
      throw std::length_error("register of " + std::to_string(n + m) + " qubits exceeds the " +
                              std::to_string(max_qubits) + "-qubit cap");
    }
  }

  friend bool operator==(const RegisterLayout&, const RegisterLayout&) = default;
};

enum class Weighting { UniformDistinct, Multiplicity };

template <typename Real>
class BasicStateVector {
 public:
  using Complex = std::complex<Real>;
  using Amplitudes = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  BasicStateVector(RegisterLayout layout, Amplitudes amplitudes)
      : layout_(layout), amplitudes_(std::move(amplitudes)) {
    layout_.validate(62);
    if (static_cast<std::uint64_t>(amplitudes_.size()) != layout_.dim()) {
      throw std::invalid_argument("amplitude vector length does not match the register layout");
    }
  }

  static BasicStateVector basis(RegisterLayout layout, Code code, Code label = 0) {
    layout.validate();
    if (code >= (Code{1} << layout.n) || label >= (Code{1} << layout.m)) {
      throw std::out_of_range("basis state outside the register");
    }
    Amplitudes amps = Amplitudes::Zero(static_cast<Eigen::Index>(layout.dim()));
    amps[static_cast<Eigen::Index>(layout.index(code, label))] = Complex(1);
    return BasicStateVector(layout, std::move(amps));
  }

  const RegisterLayout& layout() const { return layout_; }
  const Amplitudes& amplitudes() const { return amplitudes_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  Complex amplitude(Code code, Code label = 0) const {
    return amplitudes_[static_cast<Eigen::Index>(layout_.index(code, label))];
  }
  Real norm() const { return amplitudes_.norm(); }

  friend bool operator==(const BasicStateVector& a, const BasicStateVector& b) {
    return a.layout_ == b.layout_ && a.amplitudes_ == b.amplitudes_;
  }

 private:
  RegisterLayout layout_;
  Amplitudes amplitudes_;
};

using StateVector = BasicStateVector<double>;

/// Equal superposition of the occupied distance codes with ancillae at |0...0>.
/// `codes` may repeat; Multiplicity weighting gives amplitude ~ sqrt(count).
template <typename Real = double>
BasicStateVector<Real> prepare_superposition(std::span<const Code> codes, RegisterLayout layout,
                                             Weighting weighting = Weighting::UniformDistinct) {
  layout.validate();
  if (codes.empty()) throw std::invalid_argument("cannot superpose an empty code set");
  const Code limit = Code{1} << layout.n;
  std::map<Code, std::size_t> counts;
  for (Code c : codes) {
    if (c >= limit) {
      throw std::out_of_range("code " + std::to_string(c) + " does not fit in " +
                              std::to_string(layout.n) + " qubits");
    }
    ++counts[c];
  }
  using Amps = typename BasicStateVector<Real>::Amplitudes;
  Amps amps = Amps::Zero(static_cast<Eigen::Index>(layout.dim()));
  Real total = 0;
  for (const auto& [code, count] : counts) {
    total += weighting == Weighting::Multiplicity ? static_cast<Real>(count) : Real(1);
  }
  for (const auto& [code, count] : counts) {
    const Real mass = weighting == Weighting::Multiplicity ? static_cast<Real>(count) : Real(1);
    amps[static_cast<Eigen::Index>(layout.index(code, 0))] = std::sqrt(mass / total);
  }
  return BasicStateVector<Real>(layout, std::move(amps));
}

/// Labeling unitary: CNOT cascade copying the top m distance bits onto the ancillae,
/// ancilla bit (m-1-j) ^= distance bit (n-1-j). Realized as a basis permutation.
template <typename Real>
BasicStateVector<Real> apply_label_unitary(const BasicStateVector<Real>& state) {
  const RegisterLayout& layout = state.layout();
  if (layout.m < 1) throw std::invalid_argument("labeling unitary needs at least one ancilla");
  if (layout.m > layout.n) {
    throw std::invalid_argument("cannot copy " + std::to_string(layout.m) +
                                " label bits out of a " + std::to_string(layout.n) +
                                "-qubit distance register");
  }
  using Amps = typename BasicStateVector<Real>::Amplitudes;
  const auto& in = state.amplitudes();
  Amps out = Amps::Zero(in.size());
  for (std::uint64_t idx = 0; idx < layout.dim(); ++idx) {
    const Code code = layout.code_of(idx);
    const Code label = layout.label_of(idx) ^ bucket_of(code, layout.n, layout.m);
    out[static_cast<Eigen::Index>(layout.index(code, label))] = in[static_cast<Eigen::Index>(idx)];
  }
  return BasicStateVector<Real>(layout, std::move(out));
}

struct Outcome {
  Code code;
  Code label;
  friend auto operator<=>(const Outcome&, const Outcome&) = default;
};

using OutcomeDistribution = std::map<Outcome, double>;

inline constexpr double kOutcomeCutoff = 1e-12;

/// Born-rule probabilities of a joint readout of both registers.
template <typename Real>
OutcomeDistribution enumerate_outcomes(const BasicStateVector<Real>& state) {
  const RegisterLayout& layout = state.layout();
  OutcomeDistribution dist;
  const auto& amps = state.amplitudes();
  for (std::uint64_t idx = 0; idx < layout.dim(); ++idx) {
    const double p = static_cast<double>(std::norm(amps[static_cast<Eigen::Index>(idx)]));
    if (p >= kOutcomeCutoff) dist.emplace(Outcome{layout.code_of(idx), layout.label_of(idx)}, p);
  }
  return dist;
}

/// Finite-shot readout, reproducible per seed. Draws are returned in draw order.
template <typename Real>
std::vector<Outcome> sample_outcomes(const BasicStateVector<Real>& state, std::size_t shots,
                                     std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be positive");
  const OutcomeDistribution dist = enumerate_outcomes(state);
  if (dist.empty()) throw std::invalid_argument("state has no outcome above the cutoff");
  std::vector<Outcome> support;
  std::vector<double> cumulative;
  double running = 0.0;
  for (const auto& [outcome, p] : dist) {
    running += p;
    support.push_back(outcome);
    cumulative.push_back(running);
  }
  std::mt19937_64 rng(seed);
  std::vector<Outcome> draws;
  draws.reserve(shots);
  for (std::size_t s = 0; s < shots; ++s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    draws.push_back(support[static_cast<std::size_t>(it - cumulative.begin())]);
  }
  return draws;
}

template <typename Real>
struct EffectResult {
  BasicStateVector<Real> state;  // renormalized post-measurement state
  Real probability;              // <psi| E |psi>
};

/// Applies the measurement operator sqrt(E) (x) I to a state whose occupied
/// amplitudes all carry the same ancilla label.
template <typename Real>
EffectResult<Real> apply_effect(const BasicStateVector<Real>& state,
                                const BasicEffectOperator<Real>& effect) {
  const RegisterLayout& layout = state.layout();
  if (effect.dim() != (Eigen::Index{1} << layout.n)) {
    throw std::invalid_argument("effect acts on " + std::to_string(effect.width()) +
                                " qubits but the distance register has " +
                                std::to_string(layout.n));
  }
  const auto& in = state.amplitudes();
  std::optional<Code> label;
  for (std::uint64_t idx = 0; idx < layout.dim(); ++idx) {
    if (in[static_cast<Eigen::Index>(idx)] == typename BasicStateVector<Real>::Complex(0)) continue;
    const Code l = layout.label_of(idx);
    if (label && *label != l) {
      throw std::invalid_argument("effect application needs a uniform ancilla label");
    }
    label = l;
  }
  using Amps = typename BasicStateVector<Real>::Amplitudes;
  Amps out(in.size());
  Real probability = 0;
  for (std::uint64_t idx = 0; idx < layout.dim(); ++idx) {
    const Real w = effect.weight(layout.code_of(idx));
    const auto a = in[static_cast<Eigen::Index>(idx)];
    out[static_cast<Eigen::Index>(idx)] = std::sqrt(w) * a;
    probability += w * std::norm(a);
  }
  if (!(probability > Real(0)) || !std::isfinite(probability)) {
    throw std::domain_error("effect annihilates state");
  }
  out /= std::sqrt(probability);
  return {BasicStateVector<Real>(layout, std::move(out)), probability};
}

}  // namespace qclust
