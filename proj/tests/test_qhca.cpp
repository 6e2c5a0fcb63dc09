#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qclust/analysis.hpp"
#include "qclust/dataset.hpp"
#include "qclust/qhca.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace qclust;

namespace {

// Points on the x axis at the given distances from the first point (0).
Points on_axis(const std::vector<double>& xs) {
  Points p(static_cast<Eigen::Index>(xs.size()), 2);
  for (std::size_t i = 0; i < xs.size(); ++i) p.row(static_cast<Eigen::Index>(i)) << xs[i], 0.0;
  return p;
}

std::set<std::set<std::size_t>> partition_of(const Clustering& c) {
  std::set<std::set<std::size_t>> out;
  for (const Cluster& cl : c.clusters) out.emplace(cl.members.begin(), cl.members.end());
  return out;
}

// Classical binning: group point ids by code / 2^(n-m).
std::set<std::set<std::size_t>> binning(const std::vector<Code>& codes, int n, int m) {
  std::map<Code, std::set<std::size_t>> groups;
  for (std::size_t i = 0; i < codes.size(); ++i) groups[codes[i] / (Code{1} << (n - m))].insert(i);
  std::set<std::set<std::size_t>> out;
  for (auto& [b, g] : groups) out.insert(g);
  return out;
}

DistanceEncoding raw(std::vector<double> d) { return encode_raw_distances(d, 1.0); }

}  // namespace

TEST_CASE("four points in two halves of the code range") {
  QhcaConfig config;
  config.ancillae = AncillaCount{1};
  config.encoding.origin = FixedOrigin{Eigen::Vector2d(0, 0)};
  const Points p = on_axis({1, 2, 9, 10});
  const Clustering c = qhca_run(p, config);
  CHECK(c.params.n == 4);
  CHECK(c.params.m == 1);
  CHECK(partition_of(c) == std::set<std::set<std::size_t>>{{0, 1}, {2, 3}});
  CHECK(c.clusters[0].members == std::vector<std::size_t>{0, 1});
  CHECK(c.clusters[0].tag == Code{0});
  CHECK(c.clusters[1].tag == Code{1});
}

TEST_CASE("coincident points stay together for any ancilla count") {
  Points p = Points::Constant(5, 2, 1.5);
  for (int m = 1; m <= 4; ++m) {
    QhcaConfig config;
    config.ancillae = AncillaCount{m};
    const Clustering c = qhca_run(p, config);
    CHECK(c.cluster_count() == 1);
    CHECK(c.clusters[0].members.size() == 5);
  }
}

TEST_CASE("extract clusters keeps the ancilla label as tag") {
  const auto enc = raw({3, 12});
  OutcomeDistribution out{{{3, 0}, 0.5}, {{12, 3}, 0.5}};
  const Clustering c = extract_clusters(out, enc);
  REQUIRE(c.cluster_count() == 2);
  CHECK(c.clusters[0].members == std::vector<std::size_t>{0});
  CHECK(c.clusters[0].tag == Code{0});
  CHECK(c.clusters[1].members == std::vector<std::size_t>{1});
  CHECK(c.clusters[1].tag == Code{3});

  OutcomeDistribution missing{{{3, 0}, 1.0}};
  CHECK_THROWS(extract_clusters(missing, enc));
}

TEST_CASE("pipeline equals classical binning on random datasets") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 8;
    const int m = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    const std::size_t count = 1 + rng() % 64;
    std::vector<double> d(count);
    std::uniform_real_distribution<double> u(0, static_cast<double>((Code{1} << n) - 1));
    for (double& x : d) x = u(rng);
    d[0] = static_cast<double>((Code{1} << n) - 1);
    const auto enc = raw(d);
    REQUIRE(enc.n == n);
    const Clustering c = qhca_cluster(enc, m);
    c.validate();
    CHECK(partition_of(c) == binning(enc.codes, n, m));
    for (const Cluster& cl : c.clusters) {
      for (std::size_t a : cl.members)
        for (std::size_t b : cl.members)
          CHECK(std::llabs(static_cast<long long>(enc.codes[a]) - static_cast<long long>(enc.codes[b])) <
                (1LL << (n - m)));
    }
  }
}

TEST_CASE("ancilla resolution") {
  const auto enc = raw({0, 12.48});
  CHECK(resolve_ancillae(AncillaCount{3}, enc) == 3);
  CHECK(resolve_ancillae(ClusterWidth{3.12}, enc) == 2);
  CHECK(resolve_ancillae(ClusterWidth{100.0}, enc) == 1);
  CHECK_THROWS(resolve_ancillae(AncillaCount{0}, enc));
}

TEST_CASE("target k larger than the distinct codes is rejected") {
  const auto enc = raw({1, 1, 2});
  CHECK_THROWS(qhca_cluster(enc, 1, 3));
  CHECK(qhca_cluster(enc, 1, 2).cluster_count() == 2);
}

TEST_CASE("refine to k") {
  SUBCASE("one bucket splits at its widest gap") {
    const auto enc = raw({1, 2, 14, 15});
    const Clustering one = make_clustering(4, {{0, 1, 2, 3}});
    const Clustering two = refine_to_k(one, enc, 2);
    CHECK(partition_of(two) == std::set<std::set<std::size_t>>{{0, 1}, {2, 3}});
  }
  SUBCASE("identity when the count already matches") {
    const auto enc = raw({1, 2, 14, 15});
    const Clustering c = make_clustering(4, {{0, 1}, {2, 3}});
    CHECK(partition_of(refine_to_k(c, enc, 2)) == partition_of(c));
  }
  SUBCASE("four symmetric buckets merge to the m = 1 partition") {
    const auto enc = raw({2, 3, 4, 5, 10, 11, 12, 13});
    const Clustering four = qhca_cluster(enc, 2);
    REQUIRE(four.cluster_count() == 4);
    const Clustering merged = refine_to_k(four, enc, 2);
    CHECK(partition_of(merged) == partition_of(qhca_cluster(enc, 1)));
  }
  SUBCASE("closest adjacent pair merges first") {
    const auto enc = raw({0, 5, 6, 15});
    const Clustering c = make_clustering(4, {{0}, {1}, {2}, {3}});
    CHECK(partition_of(refine_to_k(c, enc, 3)) == std::set<std::set<std::size_t>>{{0}, {1, 2}, {3}});
  }
  SUBCASE("refinement keeps code intervals ordered") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<double> d(40);
      for (double& x : d) x = static_cast<double>(rng() % 256);
      const auto enc = raw(d);
      const Clustering base = qhca_cluster(enc, 3);
      const std::size_t distinct = enc.distinct_codes().size();
      for (std::size_t k = 1; k <= std::min<std::size_t>(distinct, 12); ++k) {
        const Clustering r = refine_to_k(base, enc, k);
        r.validate();
        CHECK(r.cluster_count() == k);
        Code prev_hi = 0;
        for (std::size_t i = 0; i < r.clusters.size(); ++i) {
          Code lo = ~Code{0}, hi = 0;
          for (std::size_t id : r.clusters[i].members) {
            lo = std::min(lo, enc.codes[id]);
            hi = std::max(hi, enc.codes[id]);
          }
          if (i > 0) CHECK(lo > prev_hi);
          prev_hi = hi;
        }
      }
      CHECK_THROWS(refine_to_k(base, enc, distinct + 1));
    }
  }
}

TEST_CASE("clustering on rings is invariant under rotation about the origin") {
  const Dataset rings = gen_circles({400, 0.5, 0.1, 3});
  QhcaConfig config;
  config.ancillae = AncillaCount{2};
  config.encoding.origin = FixedOrigin{Eigen::Vector2d(0, 0)};
  config.encoding.scale = ExplicitScale{10.0};
  const Clustering base = qhca_run(rings.points, config);
  for (double angle : {0.5, 1.7, 3.0}) {
    // a quarter-turn keeps coordinates exact up to sign; other angles may shift a
    // distance by an ulp, so compare only points not sitting on a rounding edge
    Eigen::Matrix2d rot;
    rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    const Points turned = rings.points * rot.transpose();
    const Clustering c = qhca_run(turned, config);
    for (std::size_t i = 0; i < rings.size(); ++i) {
      const double d = 10.0 * rings.points.row(static_cast<Eigen::Index>(i)).norm();
      if (std::abs(d - std::floor(d) - 0.5) < 1e-9) continue;
      CHECK(c.assignments[i] == base.assignments[i]);
    }
  }
}
