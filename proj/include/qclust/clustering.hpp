#pragma once

#include "qclust/encoding.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qclust {

struct Cluster {
  int label = 0;                      // dense, 0..K-1
  std::vector<std::size_t> members;   // ascending point ids
  std::optional<Code> tag;            // ancilla label the cluster was read from, if any
};

/// Run provenance recorded next to a partition.
struct ClusteringParams {
  std::string algorithm;
  std::string origin;
  std::optional<std::size_t> origin_index;
  std::optional<double> scale;
  std::optional<int> n;
  std::optional<int> m;
  std::optional<double> delta;
  std::optional<double> kappa;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> weighting;
  std::optional<std::string> linkage;
};

struct Clustering {
  std::vector<int> assignments;  // point id -> cluster label
  std::vector<Cluster> clusters;
  ClusteringParams params;

  std::size_t size() const { return assignments.size(); }
  std::size_t cluster_count() const { return clusters.size(); }

  /// Throws unless every point sits in exactly one nonempty, densely labeled cluster.
  void validate() const;
};

/// Builds a clustering from member groups; labels follow the order of `groups`.
/// Empty groups are dropped.
Clustering make_clustering(std::size_t point_count, std::vector<std::vector<std::size_t>> groups,
                           std::vector<std::optional<Code>> tags = {});

/// Builds a clustering from per-point labels, ordering clusters by smallest member id.
Clustering clustering_from_labels(const std::vector<int>& labels);

/// Reorders clusters by their smallest code (then label) and relabels densely.
Clustering order_by_codes(Clustering clustering, const DistanceEncoding& encoding);

/// Merges adjacent code intervals with the smallest gap while there are too many
/// clusters; splits the widest cluster at its largest internal code gap while there
/// are too few. Ties go to the lowest label.
Clustering refine_to_k(const Clustering& clustering, const DistanceEncoding& encoding,
                       std::size_t target_k);

}  // namespace qclust
