#pragma once

#include "qclust/clustering.hpp"
#include "qclust/metric.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace qclust {

// ---- PCA -------------------------------------------------------------------

struct PcaModel {
  Eigen::VectorXd mean;        // per-feature mean of the input
  Eigen::VectorXd scale;       // per-feature divisor (ones when not standardized)
  Eigen::Matrix<double, 2, Eigen::Dynamic> components;  // orthonormal rows
  Eigen::Vector2d explained;   // nonincreasing variances along the components

  Points transform(const Points& data) const;
};

struct PcaResult {
  PcaModel model;
  Points projected;  // N x 2
};

/// Projects onto the top two covariance eigenvectors. Standardization uses the
/// population standard deviation. Each component's largest-magnitude entry is positive.
PcaResult pca_2d(const Points& data, bool standardize);

// ---- classical baselines ---------------------------------------------------

enum class Linkage { Single, Complete };

/// Bottom-up merging of the closest pair of clusters under the linkage, Euclidean
/// distances, ties to the smallest index pair. Clusters are labeled by smallest member.
Clustering agglomerative_baseline(const Points& points, std::size_t k, Linkage linkage);

/// Bisecting scheme: split the widest cluster with 2-means seeded by its farthest pair.
Clustering divisive_baseline(const Points& points, std::size_t k);

// ---- scoring ---------------------------------------------------------------

enum class BinaryLabel { Positive, Negative };

struct ConfusionCounts {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  std::size_t total() const { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct BinaryScore {
  ConfusionCounts counts;
  double accuracy;
};

/// Maps each cluster to its majority class (ties -> positive) and scores the result.
BinaryScore score_binary(const Clustering& clustering, std::span<const BinaryLabel> labels);

/// Fraction of points belonging to their cluster's majority ring.
double ring_purity(const Clustering& clustering, std::span<const int> ring_labels);

}  // namespace qclust
