#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qclust/state_vector.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace qclust;

namespace {

StateVector random_state(RegisterLayout layout, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  StateVector::Amplitudes a(static_cast<Eigen::Index>(layout.dim()));
  for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = {g(rng), g(rng)};
  a.normalize();
  return StateVector(layout, a);
}

// Label-0 state over the distance register only, usable with apply_effect.
StateVector random_code_state(int n, std::uint64_t seed) { return random_state({n, 0}, seed); }

// The permutation matrix of the labeling map, built column by column from bit strings.
Eigen::MatrixXd label_permutation(int n, int m) {
  const int dim = 1 << (n + m);
  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(dim, dim);
  for (int idx = 0; idx < dim; ++idx) {
    int bits[32];
    for (int q = 0; q < n + m; ++q) bits[q] = (idx >> q) & 1;  // q < m: ancillae
    for (int j = 0; j < m; ++j) bits[m - 1 - j] ^= bits[m + n - 1 - j];
    int out = 0;
    for (int q = 0; q < n + m; ++q) out |= bits[q] << q;
    perm(out, idx) = 1.0;
  }
  return perm;
}

}  // namespace

TEST_CASE("prepare superposition") {
  const std::vector<Code> two{2, 3};
  const auto s = prepare_superposition(std::span<const Code>(two), {2, 0});
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(s.amplitudes()[0]) == 0.0);
  CHECK(std::abs(s.amplitudes()[1]) == 0.0);
  CHECK(s.amplitudes()[2].real() == doctest::Approx(h));
  CHECK(s.amplitudes()[3].real() == doctest::Approx(h));

  const std::vector<Code> five{5};
  CHECK(prepare_superposition(std::span<const Code>(five), {3, 1}) == StateVector::basis({3, 1}, 5, 0));

  std::vector<Code> all(16);
  for (Code c = 0; c < 16; ++c) all[c] = c;
  const auto u = prepare_superposition(std::span<const Code>(all), {4, 1});
  for (Code c = 0; c < 16; ++c) {
    CHECK(u.amplitude(c, 0).real() == doctest::Approx(0.25));
    CHECK(std::abs(u.amplitude(c, 1)) == 0.0);
  }

  const std::vector<Code> dup{1, 1, 1, 2};
  const auto w = prepare_superposition(std::span<const Code>(dup), {2, 0}, Weighting::Multiplicity);
  CHECK(w.amplitude(1).real() == doctest::Approx(std::sqrt(0.75)));
  CHECK(w.amplitude(2).real() == doctest::Approx(0.5));

  CHECK_THROWS(prepare_superposition(std::span<const Code>(), {2, 0}));
  const std::vector<Code> big{4};
  CHECK_THROWS(prepare_superposition(std::span<const Code>(big), {2, 0}));
  CHECK_THROWS_AS((RegisterLayout{20, 5}.validate()), std::length_error);
}

TEST_CASE("labeling unitary examples") {
  CHECK(apply_label_unitary(StateVector::basis({4, 2}, 0b1011)) == StateVector::basis({4, 2}, 0b1011, 0b10));
  CHECK(apply_label_unitary(StateVector::basis({4, 2}, 0)) == StateVector::basis({4, 2}, 0));
  CHECK_THROWS(apply_label_unitary(StateVector::basis({4, 0}, 3)));

  const std::vector<Code> codes{0, 5, 10, 15};
  const auto out = apply_label_unitary(prepare_superposition(std::span<const Code>(codes), {4, 2}));
  const auto dist = enumerate_outcomes(out);
  CHECK(dist.size() == 4);
  CHECK(dist.count({0, 0}) == 1);
  CHECK(dist.count({5, 1}) == 1);
  CHECK(dist.count({10, 2}) == 1);
  CHECK(dist.count({15, 3}) == 1);
}

TEST_CASE("labeling unitary matches the explicit 64x64 permutation matrix") {
  const Eigen::MatrixXd perm = label_permutation(4, 2);
  CHECK((perm.transpose() * perm).isIdentity());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const StateVector s = random_state({4, 2}, seed);
    const StateVector::Amplitudes expected = perm.cast<std::complex<double>>() * s.amplitudes();
    CHECK((apply_label_unitary(s).amplitudes() - expected).norm() == 0.0);
  }
}

TEST_CASE("labeling unitary is an involution and preserves the norm") {
  for (int n = 1; n <= 5; ++n) {
    for (int m = 1; m <= n; ++m) {
      const StateVector s = random_state({n, m}, static_cast<std::uint64_t>(10 * n + m));
      const StateVector once = apply_label_unitary(s);
      CHECK(apply_label_unitary(once) == s);
      CHECK(std::abs(once.norm() - s.norm()) <= 1e-12);
    }
  }
}

TEST_CASE("labels are entangled with the top code bits") {
  for (int n = 1; n <= 6; ++n) {
    for (int m = 1; m <= n; ++m) {
      std::vector<Code> all(std::size_t{1} << n);
      for (Code c = 0; c < all.size(); ++c) all[c] = c;
      const auto dist = enumerate_outcomes(apply_label_unitary(prepare_superposition(std::span<const Code>(all), {n, m})));
      CHECK(dist.size() == all.size());
      for (const auto& [o, p] : dist) CHECK(o.label == (o.code >> (n - m)));
    }
  }
}

TEST_CASE("enumerate outcomes") {
  const auto b = enumerate_outcomes(StateVector::basis({3, 1}, 5, 1));
  REQUIRE(b.size() == 1);
  CHECK(b.begin()->first == Outcome{5, 1});
  CHECK(b.begin()->second == 1.0);

  const std::vector<Code> codes{0, 3};
  const auto d = enumerate_outcomes(prepare_superposition(std::span<const Code>(codes), {2, 1}));
  CHECK(d.at({0, 0}) == doctest::Approx(0.5));
  CHECK(d.at({3, 0}) == doctest::Approx(0.5));

  const StateVector r = random_state({3, 2}, 9);
  double total = 0;
  for (const auto& [o, p] : enumerate_outcomes(r)) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sampling") {
  const auto basis = sample_outcomes(StateVector::basis({3, 1}, 6, 1), 500, 3);
  for (const Outcome& o : basis) CHECK(o == Outcome{6, 1});

  const std::vector<Code> codes{1, 2};
  const auto half = prepare_superposition(std::span<const Code>(codes), {2, 0});
  const auto draws = sample_outcomes(half, 100000, 42);
  const double f1 = std::count(draws.begin(), draws.end(), Outcome{1, 0}) / 1e5;
  CHECK(std::abs(f1 - 0.5) < 0.01);
  CHECK(sample_outcomes(half, 1000, 7) == sample_outcomes(half, 1000, 7));
  CHECK_THROWS(sample_outcomes(half, 0, 7));
}

TEST_CASE("sampled frequencies pass a chi-square test against the Born rule") {
  const StateVector s = random_state({3, 1}, 123);
  const auto dist = enumerate_outcomes(s);
  const std::size_t shots = 100000;
  const auto draws = sample_outcomes(s, shots, 2024);
  std::map<Outcome, double> counts;
  for (const Outcome& o : draws) counts[o] += 1;
  double chi2 = 0;
  for (const auto& [o, p] : dist) {
    const double expected = p * static_cast<double>(shots);
    const double diff = counts[o] - expected;
    chi2 += diff * diff / expected;
  }
  // 15 degrees of freedom: upper 0.001 quantile is 37.70
  CHECK(dist.size() == 16);
  CHECK(chi2 < 37.70);
}

TEST_CASE("effect application") {
  const std::vector<Code> codes{4, 5, 6};
  const auto s = prepare_superposition(std::span<const Code>(codes), {3, 0});

  const auto id = apply_effect(s, EffectOperator::from_weights(Eigen::VectorXd::Ones(8)));
  CHECK(id.probability == doctest::Approx(1.0));
  CHECK((id.state.amplitudes() - s.amplitudes()).norm() < 1e-15);

  const std::vector<Code> two{1, 2};
  Eigen::VectorXd proj = Eigen::VectorXd::Zero(4);
  proj[2] = 1;
  const auto p = apply_effect(prepare_superposition(std::span<const Code>(two), {2, 0}),
                              EffectOperator::from_weights(proj));
  CHECK(p.probability == doctest::Approx(0.5));
  CHECK(p.state.amplitude(2).real() == doctest::Approx(1.0));
  CHECK(std::abs(p.state.amplitude(1)) == 0.0);

  const auto g = apply_effect(s, build_effect<double>(5, 1.0, 3));
  const double r = std::exp(-0.25);
  CHECK(g.state.amplitude(4).real() / g.state.amplitude(5).real() == doctest::Approx(r));
  CHECK(g.state.amplitude(6).real() / g.state.amplitude(5).real() == doctest::Approx(r));

  Eigen::VectorXd miss = Eigen::VectorXd::Zero(8);
  miss[0] = 1;
  try {
    apply_effect(s, EffectOperator::from_weights(miss));
    FAIL("expected annihilation");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()) == "effect annihilates state");
  }

  const auto mixed = random_state({3, 1}, 1);
  CHECK_THROWS_AS(apply_effect(mixed, build_effect<double>(0, 1.0, 3)), std::invalid_argument);
}

TEST_CASE("Born probabilities over a complete family sum to one") {
  for (int n = 1; n <= 6; ++n) {
    for (double delta : {0.25, 1.0, 4.0}) {
      const auto family = normalize_effect_family<double>(n, delta);
      const StateVector s = random_code_state(n, static_cast<std::uint64_t>(n * 100 + delta * 4));
      double total = 0;
      for (const auto& e : family) {
        // an effect may vanish on a sparse state; count its probability as zero
        double p = 0;
        for (Eigen::Index j = 0; j < s.dim(); ++j) p += e.weights()[j] * std::norm(s.amplitudes()[j]);
        if (p > 0) CHECK(apply_effect(s, e).probability == doctest::Approx(p).epsilon(1e-12));
        total += p;
      }
      CHECK(std::abs(total - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("single-precision instantiation") {
  const std::vector<Code> codes{1, 2};
  const auto s = prepare_superposition<float>(std::span<const Code>(codes), {2, 1});
  const auto out = apply_label_unitary(s);
  CHECK(std::abs(out.norm() - 1.0f) < 1e-6f);
}
