#include "qclust/analysis.hpp"
#include "qclust/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace qclust {

Points PcaModel::transform(const Points& data) const {
  if (data.cols() != mean.size()) {
    throw std::invalid_argument("PCA model expects " + std::to_string(mean.size()) + " features");
  }
  const Points centered = (data.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
  return centered * components.transpose();
}

PcaResult pca_2d(const Points& data, bool standardize) {
  const Eigen::Index rows = data.rows();
  const Eigen::Index cols = data.cols();
  if (rows < 3) throw std::invalid_argument("PCA needs at least 3 points");
  if (cols < 2) throw std::invalid_argument("PCA needs at least 2 features");
  if (!data.allFinite()) throw std::invalid_argument("PCA input contains non-finite values");

  PcaModel model;
  model.mean = data.colwise().mean().transpose();
  Points centered = data.rowwise() - model.mean.transpose();
  model.scale = Eigen::VectorXd::Ones(cols);
  if (standardize) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double sd = std::sqrt(centered.col(j).squaredNorm() / static_cast<double>(rows));
      if (!(sd > 0.0)) {
        throw std::invalid_argument("feature " + std::to_string(j) +
                                    " has zero variance and cannot be standardized");
      }
      model.scale[j] = sd;
      centered.col(j) /= sd;
    }
  }

  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(rows - 1);
  const auto eig = jacobi_eigen(cov);
  model.components.resize(2, cols);
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd v = eig.vectors.col(c);
    Eigen::Index peak = 0;
    for (Eigen::Index j = 1; j < cols; ++j) {
      if (std::abs(v[j]) > std::abs(v[peak])) peak = j;
    }
    if (v[peak] < 0) v = -v;
    model.components.row(c) = v.transpose();
    model.explained[c] = std::max(0.0, eig.values[c]);
  }
  return {model, centered * model.components.transpose()};
}

namespace {

void check_k(std::size_t k, Eigen::Index rows) {
  if (k < 1) throw std::invalid_argument("cluster count must be at least 1");
  if (k > static_cast<std::size_t>(rows)) {
    throw std::invalid_argument("cannot form " + std::to_string(k) + " clusters from " +
                                std::to_string(rows) + " points");
  }
}

}  // namespace

Clustering agglomerative_baseline(const Points& points, std::size_t k, Linkage linkage) {
  check_k(k, points.rows());
  const auto count = static_cast<std::size_t>(points.rows());
  const Metric metric = Metric::euclidean();
  Eigen::MatrixXd dist(points.rows(), points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    dist(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < points.rows(); ++j) {
      dist(i, j) = dist(j, i) = minkowski_distance(points.row(i), points.row(j), metric);
    }
  }

  // slot i holds the cluster whose smallest member is i
  std::vector<std::size_t> owner(count);
  std::vector<std::size_t> active(count);
  for (std::size_t i = 0; i < count; ++i) owner[i] = active[i] = i;

  while (active.size() > k) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 1;
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const double d = dist(static_cast<Eigen::Index>(active[x]), static_cast<Eigen::Index>(active[y]));
        if (d < best) {
          best = d;
          bi = x;
          bj = y;
        }
      }
    }
    const auto a = static_cast<Eigen::Index>(active[bi]);
    const auto b = static_cast<Eigen::Index>(active[bj]);
    for (std::size_t other : active) {
      const auto o = static_cast<Eigen::Index>(other);
      if (o == a || o == b) continue;
      const double merged = linkage == Linkage::Single ? std::min(dist(a, o), dist(b, o))
                                                       : std::max(dist(a, o), dist(b, o));
      dist(a, o) = dist(o, a) = merged;
    }
    for (auto& o : owner) {
      if (o == active[bj]) o = active[bi];
    }
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
  }

  std::vector<int> labels(count);
  for (std::size_t i = 0; i < count; ++i) labels[i] = static_cast<int>(owner[i]);
  Clustering out = clustering_from_labels(labels);
  out.params.algorithm = "agglomerative";
  out.params.linkage = linkage == Linkage::Single ? "single" : "complete";
  return out;
}

namespace {

double diameter(const Points& points, const std::vector<std::size_t>& members,
                std::size_t* far_a = nullptr, std::size_t* far_b = nullptr) {
  double best = -1.0;
  const Metric metric = Metric::euclidean();
  for (std::size_t x = 0; x < members.size(); ++x) {
    for (std::size_t y = x + 1; y < members.size(); ++y) {
      const double d = minkowski_distance(points.row(static_cast<Eigen::Index>(members[x])),
                                          points.row(static_cast<Eigen::Index>(members[y])), metric);
      if (d > best) {
        best = d;
        if (far_a) *far_a = members[x];
        if (far_b) *far_b = members[y];
      }
    }
  }
  return std::max(best, 0.0);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> bisect(
    const Points& points, const std::vector<std::size_t>& members) {
  std::size_t seed_a = members.front(), seed_b = members.back();
  diameter(points, members, &seed_a, &seed_b);
  Eigen::RowVectorXd ca = points.row(static_cast<Eigen::Index>(seed_a));
  Eigen::RowVectorXd cb = points.row(static_cast<Eigen::Index>(seed_b));

  std::vector<std::size_t> left, right;
  std::vector<bool> side(members.size(), false);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<bool> next(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto row = points.row(static_cast<Eigen::Index>(members[i]));
      next[i] = (row - cb).squaredNorm() < (row - ca).squaredNorm();
    }
    if (iter > 0 && next == side) break;
    side = std::move(next);
    Eigen::RowVectorXd sa = Eigen::RowVectorXd::Zero(points.cols());
    Eigen::RowVectorXd sb = sa;
    std::size_t na = 0, nb = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto row = points.row(static_cast<Eigen::Index>(members[i]));
      if (side[i]) {
        sb += row;
        ++nb;
      } else {
        sa += row;
        ++na;
      }
    }
    if (na == 0 || nb == 0) break;
    ca = sa / static_cast<double>(na);
    cb = sb / static_cast<double>(nb);
  }
  for (std::size_t i = 0; i < members.size(); ++i) (side[i] ? right : left).push_back(members[i]);
  if (right.empty()) {
    // coincident points: peel off the last member so the split makes progress
    right.push_back(left.back());
    left.pop_back();
  }
  return {left, right};
}

}  // namespace

Clustering divisive_baseline(const Points& points, std::size_t k) {
  check_k(k, points.rows());
  std::vector<std::vector<std::size_t>> groups(1);
  for (Eigen::Index i = 0; i < points.rows(); ++i) groups[0].push_back(static_cast<std::size_t>(i));
  std::vector<double> diam{diameter(points, groups[0])};

  while (groups.size() < k) {
    std::size_t widest = groups.size();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (groups[g].size() < 2) continue;
      if (widest == groups.size() || diam[g] > diam[widest]) widest = g;
    }
    auto [left, right] = bisect(points, groups[widest]);
    groups[widest] = std::move(left);
    diam[widest] = diameter(points, groups[widest]);
    diam.push_back(diameter(points, right));
    groups.push_back(std::move(right));
  }

  std::vector<int> labels(static_cast<std::size_t>(points.rows()));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t id : groups[g]) labels[id] = static_cast<int>(g);
  }
  Clustering out = clustering_from_labels(labels);
  out.params.algorithm = "divisive";
  return out;
}

BinaryScore score_binary(const Clustering& clustering, std::span<const BinaryLabel> labels) {
  if (labels.size() != clustering.size()) {
    throw std::invalid_argument("label count " + std::to_string(labels.size()) +
                                " does not match " + std::to_string(clustering.size()) + " points");
  }
  if (clustering.clusters.empty()) throw std::invalid_argument("clustering has no clusters");
  BinaryScore score{};
  for (const Cluster& c : clustering.clusters) {
    std::size_t pos = 0;
    for (std::size_t id : c.members) pos += labels[id] == BinaryLabel::Positive;
    const std::size_t neg = c.members.size() - pos;
    if (pos >= neg) {
      score.counts.tp += pos;
      score.counts.fp += neg;
    } else {
      score.counts.tn += neg;
      score.counts.fn += pos;
    }
  }
  score.accuracy = static_cast<double>(score.counts.tp + score.counts.tn) /
                   static_cast<double>(score.counts.total());
  return score;
}

double ring_purity(const Clustering& clustering, std::span<const int> ring_labels) {
  if (ring_labels.size() != clustering.size()) {
    throw std::invalid_argument("ring label count does not match the clustering");
  }
  if (clustering.size() == 0) return 1.0;
  std::size_t majority_total = 0;
  for (const Cluster& c : clustering.clusters) {
    std::map<int, std::size_t> counts;
    std::size_t best = 0;
    for (std::size_t id : c.members) best = std::max(best, ++counts[ring_labels[id]]);
    majority_total += best;
  }
  return static_cast<double>(majority_total) / static_cast<double>(clustering.size());
}

}  // namespace qclust
