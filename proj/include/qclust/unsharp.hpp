#pragma once

#include "qclust/clustering.hpp"
#include "qclust/effect.hpp"
#include "qclust/encoding.hpp"
#include "qclust/state_vector.hpp"

#include <optional>
#include <span>
#include <vector>

namespace qclust {

enum class CenterPolicy { LowestUnassigned, HighestAmplitude };

/// When to stop opening measurement windows.
///  AtTargetK: after k-1 windows the still-unassigned points form the k-th cluster.
///  ExhaustThenMerge: open windows until every point is assigned, then refine_to_k.
enum class StopRule { AtTargetK, ExhaustThenMerge };

struct UnsharpConfig {
  std::optional<double> delta;  // empty: auto = max code / (2 k)
  double kappa = 1.0;
  std::optional<std::size_t> target_k;
  CenterPolicy center = CenterPolicy::LowestUnassigned;
  StopRule stop = StopRule::AtTargetK;
  Weighting weighting = Weighting::UniformDistinct;
  EncodingOptions encoding;
};

double resolve_delta(const UnsharpConfig& config, const DistanceEncoding& encoding);

struct UnsharpStep {
  std::vector<std::size_t> members;  // ascending point ids
  double probability;                // Born probability of the effect outcome
  StateVector post_state;
};

/// One unsharp measurement around `center` on the superposition of the unassigned
/// codes. Members are the unassigned points with |center - code| <= kappa * delta.
UnsharpStep unsharp_step(const DistanceEncoding& encoding, std::span<const std::size_t> unassigned,
                         Code center, double delta, double kappa = 1.0,
                         Weighting weighting = Weighting::UniformDistinct);

/// Picks the next window center among the unassigned points.
Code next_center(const DistanceEncoding& encoding, std::span<const std::size_t> unassigned,
                 CenterPolicy policy, Weighting weighting);

/// Iterated unsharp clustering of an existing encoding.
Clustering unsharp_cluster(const DistanceEncoding& encoding, const UnsharpConfig& config);

Clustering unsharp_run(const Points& points, const UnsharpConfig& config);

}  // namespace qclust
