#pragma once

#include "qclust/clustering.hpp"
#include "qclust/encoding.hpp"
#include "qclust/state_vector.hpp"

#include <optional>
#include <variant>

namespace qclust {

/// Ancilla register sized directly, or derived from the desired cluster width D_min.
struct AncillaCount {
  int m = 1;
};
struct ClusterWidth {
  double d_min = 1.0;  // in unscaled distance units
};
using AncillaPolicy = std::variant<AncillaCount, ClusterWidth>;

struct QhcaConfig {
  std::optional<std::size_t> target_k;  // empty: keep every populated ancilla label
  AncillaPolicy ancillae = AncillaCount{1};
  EncodingOptions encoding;
  Weighting weighting = Weighting::UniformDistinct;
};

int resolve_ancillae(const AncillaPolicy& policy, const DistanceEncoding& encoding);

/// Superposition of the occupied codes with the labeling unitary applied. When m
/// exceeds the code width the distance register is widened to m qubits.
StateVector qhca_labeled_state(const DistanceEncoding& encoding, int m,
                               Weighting weighting = Weighting::UniformDistinct,
                               int max_qubits = kDefaultMaxQubits);

/// Assigns each point the ancilla label read out alongside its code.
Clustering extract_clusters(const OutcomeDistribution& outcomes, const DistanceEncoding& encoding);

/// Pipeline on an existing encoding: superpose, label, read out, optionally refine.
Clustering qhca_cluster(const DistanceEncoding& encoding, int m,
                        std::optional<std::size_t> target_k = std::nullopt,
                        Weighting weighting = Weighting::UniformDistinct,
                        int max_qubits = kDefaultMaxQubits);

/// Full run: origin selection, encoding, then qhca_cluster.
Clustering qhca_run(const Points& points, const QhcaConfig& config);

}  // namespace qclust
