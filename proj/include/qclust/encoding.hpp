#pragma once

#include "qclust/metric.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qclust {

using Code = std::uint64_t;

/// Hard ceiling on simulated register width (2^24 complex doubles = 256 MiB).
inline constexpr int kDefaultMaxQubits = 24;

/// Integer distance codes of every point measured from one origin.
struct DistanceEncoding {
  std::optional<std::size_t> origin_index;  // empty when the origin is a free coordinate
  Eigen::VectorXd origin;
  double scale = 1.0;
  std::vector<Code> codes;
  int n = 1;                // distance register width
  double d_max_raw = 0.0;   // largest unscaled distance from the origin

  std::size_t size() const { return codes.size(); }
  Code max_code() const;
  std::vector<Code> distinct_codes() const;
};

/// Origin choices: an endpoint of the farthest pair, a fixed coordinate, or a point index.
struct FarthestEndpointOrigin {};
struct FixedOrigin {
  Eigen::VectorXd coords;
};
struct IndexOrigin {
  std::size_t index;
};
using OriginPolicy = std::variant<FarthestEndpointOrigin, FixedOrigin, IndexOrigin>;

/// Scale either given directly or fitted so the largest code fills `width` bits.
struct ExplicitScale {
  double factor = 1.0;
};
struct AutoFitScale {
  int width = 8;
};
using ScalePolicy = std::variant<ExplicitScale, AutoFitScale>;

struct EncodingOptions {
  OriginPolicy origin = FarthestEndpointOrigin{};
  ScalePolicy scale = ExplicitScale{};
  Metric metric = Metric::euclidean();
  int max_qubits = kDefaultMaxQubits;
};

std::string describe(const OriginPolicy& origin);
std::string describe(const ScalePolicy& scale);

/// Smallest n >= 1 with max_code < 2^n.
int register_width_for(Code max_code);

/// code_i = round(scale * distance_i), halves rounded away from zero.
DistanceEncoding encode_raw_distances(std::span<const double> distances, double scale,
                                      int max_qubits = kDefaultMaxQubits);

DistanceEncoding encode_distances(const Points& points, std::size_t origin_index,
                                  const Metric& metric, double scale,
                                  int max_qubits = kDefaultMaxQubits);

DistanceEncoding encode_distances_from(const Points& points, const Eigen::VectorXd& origin,
                                       const Metric& metric, double scale,
                                       int max_qubits = kDefaultMaxQubits);

/// Resolves the origin and scale policies, then encodes.
DistanceEncoding encode(const Points& points, const EncodingOptions& options);

/// m = ceil(log2(d_max / d_min_cluster)), at least 1.
int ancilla_width(double d_max, double d_min_cluster);

struct ClusterBounds {
  Code t;
  Code d_min;
  Code d_max;
  friend bool operator==(const ClusterBounds&, const ClusterBounds&) = default;
};

/// Code interval owned by ancilla label t: the codes whose top m of n bits spell t.
ClusterBounds cluster_bounds(Code t, int n, int m);

/// Ancilla label of a code, i.e. its top m bits out of n.
inline Code bucket_of(Code code, int n, int m) { return code >> (n - m); }

}  // namespace qclust
