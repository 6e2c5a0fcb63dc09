#include "qclust/encoding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qclust {

namespace {

void check_points(const Points& points) {
  if (points.cols() < 1) throw std::invalid_argument("points need at least one attribute");
  if (!points.allFinite()) throw std::invalid_argument("points contain non-finite coordinates");
}

std::vector<double> distances_from(const Points& points, const Eigen::VectorXd& origin,
                                   const Metric& metric) {
  std::vector<double> out(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = minkowski_distance(points.row(i), origin, metric);
  }
  return out;
}

}  // namespace

Code DistanceEncoding::max_code() const {
  return codes.empty() ? 0 : *std::max_element(codes.begin(), codes.end());
}

std::vector<Code> DistanceEncoding::distinct_codes() const {
  std::vector<Code> out(codes);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string describe(const OriginPolicy& origin) {
  std::ostringstream os;
  os.precision(17);
  if (std::holds_alternative<FarthestEndpointOrigin>(origin)) {
    os << "farthest";
  } else if (const auto* idx = std::get_if<IndexOrigin>(&origin)) {
    os << "index:" << idx->index;
  } else {
    const auto& fixed = std::get<FixedOrigin>(origin);
    os << "fixed:";
    for (Eigen::Index i = 0; i < fixed.coords.size(); ++i) {
      if (i) os << ',';
      os << fixed.coords[i];
    }
  }
  return os.str();
}

std::string describe(const ScalePolicy& scale) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* fit = std::get_if<AutoFitScale>(&scale)) {
    os << "auto:" << fit->width;
  } else {
    os << std::get<ExplicitScale>(scale).factor;
  }
  return os.str();
}

int register_width_for(Code max_code) {
  return std::max(1, static_cast<int>(std::bit_width(max_code)));
}

DistanceEncoding encode_raw_distances(std::span<const double> distances, double scale,
                                      int max_qubits) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("scale must be a positive finite number");
  }
  if (max_qubits < 1 || max_qubits > 62) {
    throw std::invalid_argument("max register width must lie in [1, 62]");
  }
  const double limit = std::ldexp(1.0, max_qubits);
  DistanceEncoding enc;
  enc.scale = scale;
  enc.codes.reserve(distances.size());
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double d = distances[i];
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw std::invalid_argument("distance of point " + std::to_string(i) +
                                  " is negative or non-finite");
    }
    const double rounded = std::round(scale * d);  // half away from zero
    if (rounded >= limit) {
      std::ostringstream os;
      os << "point " << i << " has scaled distance " << scale * d << " which needs more than "
         << max_qubits << " qubits; reduce the scale factor";
      throw std::overflow_error(os.str());
    }
    enc.codes.push_back(static_cast<Code>(rounded));
    enc.d_max_raw = std::max(enc.d_max_raw, d);
  }
  enc.n = register_width_for(enc.max_code());
  return enc;
}

DistanceEncoding encode_distances(const Points& points, std::size_t origin_index,
                                  const Metric& metric, double scale, int max_qubits) {
  check_points(points);
  if (origin_index >= static_cast<std::size_t>(points.rows())) {
    throw std::out_of_range("origin index " + std::to_string(origin_index) + " out of range for " +
                            std::to_string(points.rows()) + " points");
  }
  const Eigen::VectorXd origin = points.row(static_cast<Eigen::Index>(origin_index)).transpose();
  const auto dist = distances_from(points, origin, metric);
  DistanceEncoding enc = encode_raw_distances(dist, scale, max_qubits);
  enc.origin_index = origin_index;
  enc.origin = origin;
  return enc;
}

DistanceEncoding encode_distances_from(const Points& points, const Eigen::VectorXd& origin,
                                       const Metric& metric, double scale, int max_qubits) {
  check_points(points);
  if (origin.size() != points.cols()) {
    throw std::invalid_argument("origin has " + std::to_string(origin.size()) +
                                " coordinates but points have " + std::to_string(points.cols()));
  }
  const auto dist = distances_from(points, origin, metric);
  DistanceEncoding enc = encode_raw_distances(dist, scale, max_qubits);
  enc.origin = origin;
  return enc;
}

DistanceEncoding encode(const Points& points, const EncodingOptions& options) {
  check_points(points);
  if (points.rows() < 1) throw std::invalid_argument("cannot encode an empty dataset");

  std::optional<std::size_t> index;
  Eigen::VectorXd origin;
  if (std::holds_alternative<FarthestEndpointOrigin>(options.origin)) {
    index = points.rows() >= 2 ? farthest_pair(points, options.metric).first : 0;
  } else if (const auto* idx = std::get_if<IndexOrigin>(&options.origin)) {
    index = idx->index;
  } else {
    origin = std::get<FixedOrigin>(options.origin).coords;
  }

  double scale = 1.0;
  if (const auto* fit = std::get_if<AutoFitScale>(&options.scale)) {
    if (fit->width < 1 || fit->width > options.max_qubits) {
      throw std::invalid_argument("auto-fit width must lie in [1, " +
                                  std::to_string(options.max_qubits) + "]");
    }
    const auto dist = index ? distances_from(points, points.row(static_cast<Eigen::Index>(*index)).transpose(), options.metric)
                            : distances_from(points, origin, options.metric);
    const double far = dist.empty() ? 0.0 : *std::max_element(dist.begin(), dist.end());
    scale = far > 0.0 ? (std::ldexp(1.0, fit->width) - 1.0) / far : 1.0;
  } else {
    scale = std::get<ExplicitScale>(options.scale).factor;
  }

  if (index) return encode_distances(points, *index, options.metric, scale, options.max_qubits);
  return encode_distances_from(points, origin, options.metric, scale, options.max_qubits);
}

int ancilla_width(double d_max, double d_min_cluster) {
  if (!(d_max > 0.0) || !(d_min_cluster > 0.0)) {
    throw std::invalid_argument("ancilla_width needs positive distances");
  }
  if (d_min_cluster > d_max) {
    throw std::invalid_argument("cluster width exceeds the maximum distance");
  }
  // ratios like 12.48 / 3.12 land a few ulps above an exact power of two
  const double bits = std::log2(d_max / d_min_cluster);
  return std::max(1, static_cast<int>(std::ceil(bits - 1e-9)));
}

ClusterBounds cluster_bounds(Code t, int n, int m) {
  if (m < 0 || n < 1 || m > n || n > 62) {
    throw std::invalid_argument("cluster_bounds requires 0 <= m <= n, got n=" + std::to_string(n) +
                                " m=" + std::to_string(m));
  }
  if (t >= (Code{1} << m)) {
    throw std::out_of_range("cluster label " + std::to_string(t) + " needs more than " +
                            std::to_string(m) + " ancillae");
  }
  const int shift = n - m;
  return {t, t << shift, ((t + 1) << shift) - 1};
}

}  // namespace qclust
