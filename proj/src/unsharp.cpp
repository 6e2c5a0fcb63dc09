#include "qclust/unsharp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qclust {

double resolve_delta(const UnsharpConfig& config, const DistanceEncoding& encoding) {
  if (config.delta) {
    if (!(*config.delta > 0.0) || !std::isfinite(*config.delta)) {
      throw std::invalid_argument("delta must be positive and finite");
    }
    return *config.delta;
  }
  if (!config.target_k) throw std::invalid_argument("automatic delta needs a target cluster count");
  const double delta = static_cast<double>(encoding.max_code()) /
                       (2.0 * static_cast<double>(*config.target_k));
  // every code coincides; any width yields the same single window
  return delta > 0.0 ? delta : 1.0;
}

UnsharpStep unsharp_step(const DistanceEncoding& encoding, std::span<const std::size_t> unassigned,
                         Code center, double delta, double kappa, Weighting weighting) {
  if (unassigned.empty()) throw std::invalid_argument("no unassigned points left to measure");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  std::vector<Code> codes;
  codes.reserve(unassigned.size());
  for (std::size_t id : unassigned) codes.push_back(encoding.codes.at(id));
  if (std::find(codes.begin(), codes.end(), center) == codes.end()) {
    throw std::invalid_argument("center code " + std::to_string(center) +
                                " is not held by any unassigned point");
  }

  const RegisterLayout layout{encoding.n, 0};
  const StateVector state = prepare_superposition(std::span<const Code>(codes), layout, weighting);
  auto [post, probability] = apply_effect(state, build_effect(center, delta, encoding.n));

  const double radius = kappa * delta;
  UnsharpStep step{{}, probability, std::move(post)};
  for (std::size_t id : unassigned) {
    const Code code = encoding.codes[id];
    const double offset = code > center ? static_cast<double>(code - center)
                                        : static_cast<double>(center - code);
    if (offset <= radius) step.members.push_back(id);
  }
  std::sort(step.members.begin(), step.members.end());
  return step;
}

Code next_center(const DistanceEncoding& encoding, std::span<const std::size_t> unassigned,
                 CenterPolicy policy, Weighting weighting) {
  if (unassigned.empty()) throw std::invalid_argument("no unassigned points left");
  std::map<Code, std::size_t> counts;
  for (std::size_t id : unassigned) ++counts[encoding.codes.at(id)];
  if (policy == CenterPolicy::LowestUnassigned || weighting == Weighting::UniformDistinct) {
    // uniform amplitudes: every occupied code ties, lowest wins
    return counts.begin()->first;
  }
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

Clustering unsharp_cluster(const DistanceEncoding& encoding, const UnsharpConfig& config) {
  if (encoding.codes.empty()) throw std::invalid_argument("unsharp clustering needs at least one point");
  const std::size_t distinct = encoding.distinct_codes().size();
  if (config.target_k && (*config.target_k < 1 || *config.target_k > distinct)) {
    throw std::invalid_argument("target of " + std::to_string(*config.target_k) +
                                " clusters is unreachable with " + std::to_string(distinct) +
                                " distinct distance codes");
  }
  const double delta = resolve_delta(config, encoding);

  std::vector<std::size_t> unassigned(encoding.size());
  for (std::size_t i = 0; i < unassigned.size(); ++i) unassigned[i] = i;

  std::vector<std::vector<std::size_t>> groups;
  while (!unassigned.empty()) {
    if (config.target_k && config.stop == StopRule::AtTargetK && groups.size() + 1 == *config.target_k) {
      groups.push_back(unassigned);
      break;
    }
    const Code center = next_center(encoding, unassigned, config.center, config.weighting);
    UnsharpStep step = unsharp_step(encoding, unassigned, center, delta, config.kappa, config.weighting);
    std::vector<std::size_t> rest;
    std::set_difference(unassigned.begin(), unassigned.end(), step.members.begin(),
                        step.members.end(), std::back_inserter(rest));
    unassigned = std::move(rest);
    groups.push_back(std::move(step.members));
  }

  Clustering clustering = order_by_codes(make_clustering(encoding.size(), std::move(groups)), encoding);
  if (config.target_k && clustering.cluster_count() != *config.target_k) {
    clustering = refine_to_k(clustering, encoding, *config.target_k);
  }
  clustering.params.algorithm = "unsharp";
  clustering.params.origin_index = encoding.origin_index;
  clustering.params.scale = encoding.scale;
  clustering.params.n = encoding.n;
  clustering.params.delta = delta;
  clustering.params.kappa = config.kappa;
  clustering.params.weighting =
      config.weighting == Weighting::Multiplicity ? "multiplicity" : "uniform-distinct";
  return clustering;
}

Clustering unsharp_run(const Points& points, const UnsharpConfig& config) {
  if (points.rows() < 1) throw std::invalid_argument("unsharp clustering needs at least one point");
  const DistanceEncoding encoding = encode(points, config.encoding);
  Clustering clustering = unsharp_cluster(encoding, config);
  clustering.params.origin = describe(config.encoding.origin);
  return clustering;
}

}  // namespace qclust
