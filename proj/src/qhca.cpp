#include "qclust/qhca.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qclust {

namespace {

const char* weighting_name(Weighting w) {
  return w == Weighting::Multiplicity ? "multiplicity" : "uniform-distinct";
}

}  // namespace

int resolve_ancillae(const AncillaPolicy& policy, const DistanceEncoding& encoding) {
  if (const auto* count = std::get_if<AncillaCount>(&policy)) {
    if (count->m < 1) throw std::invalid_argument("QHCA needs at least one ancilla");
    return count->m;
  }
  const double d_min = std::get<ClusterWidth>(policy).d_min;
  if (!(d_min > 0.0)) throw std::invalid_argument("cluster width D_min must be positive");
  if (encoding.d_max_raw <= 0.0) return 1;
  return ancilla_width(encoding.d_max_raw, std::min(d_min, encoding.d_max_raw));
}

StateVector qhca_labeled_state(const DistanceEncoding& encoding, int m, Weighting weighting,
                               int max_qubits) {
  if (m < 1) throw std::invalid_argument("QHCA needs at least one ancilla");
  const RegisterLayout layout{std::max(encoding.n, m), m};
  layout.validate(max_qubits);
  const StateVector prepared = prepare_superposition(std::span<const Code>(encoding.codes), layout, weighting);
  return apply_label_unitary(prepared);
}

Clustering extract_clusters(const OutcomeDistribution& outcomes, const DistanceEncoding& encoding) {
  std::map<Code, Code> label_of;
  for (const auto& [outcome, p] : outcomes) {
    auto [it, inserted] = label_of.emplace(outcome.code, outcome.label);
    if (!inserted && it->second != outcome.label) {
      throw std::invalid_argument("code " + std::to_string(outcome.code) +
                                  " is read out with more than one ancilla label");
    }
  }
  std::map<Code, std::vector<std::size_t>> buckets;
  for (std::size_t id = 0; id < encoding.size(); ++id) {
    const auto it = label_of.find(encoding.codes[id]);
    if (it == label_of.end()) {
      throw std::invalid_argument("point " + std::to_string(id) + " has code " +
                                  std::to_string(encoding.codes[id]) +
                                  " with zero readout probability");
    }
    buckets[it->second].push_back(id);
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::optional<Code>> tags;
  for (auto& [label, members] : buckets) {
    groups.push_back(std::move(members));
    tags.push_back(label);
  }
  return make_clustering(encoding.size(), std::move(groups), std::move(tags));
}

Clustering qhca_cluster(const DistanceEncoding& encoding, int m,
                        std::optional<std::size_t> target_k, Weighting weighting, int max_qubits) {
  if (encoding.codes.empty()) throw std::invalid_argument("QHCA needs at least one point");
  if (target_k && *target_k > encoding.distinct_codes().size()) {
    throw std::invalid_argument("target of " + std::to_string(*target_k) +
                                " clusters exceeds the " +
                                std::to_string(encoding.distinct_codes().size()) +
                                " distinct distance codes");
  }
  const StateVector labeled = qhca_labeled_state(encoding, m, weighting, max_qubits);
  Clustering clustering = extract_clusters(enumerate_outcomes(labeled), encoding);
  if (target_k && clustering.cluster_count() != *target_k) {
    clustering = refine_to_k(clustering, encoding, *target_k);
  }
  clustering.params.algorithm = "qhca";
  clustering.params.origin_index = encoding.origin_index;
  clustering.params.scale = encoding.scale;
  clustering.params.n = labeled.layout().n;
  clustering.params.m = m;
  clustering.params.weighting = weighting_name(weighting);
  return clustering;
}

Clustering qhca_run(const Points& points, const QhcaConfig& config) {
  if (points.rows() < 2) throw std::invalid_argument("QHCA needs at least 2 points");
  const DistanceEncoding encoding = encode(points, config.encoding);
  const int m = resolve_ancillae(config.ancillae, encoding);
  Clustering clustering =
      qhca_cluster(encoding, m, config.target_k, config.weighting, config.encoding.max_qubits);
  clustering.params.origin = describe(config.encoding.origin);
  return clustering;
}

}  // namespace qclust
