#pragma once

#include "qclust/clustering.hpp"

#include <json.hpp>

namespace qclust {

/// Provenance record of a clustering; unset optional fields are omitted.
nlohmann::ordered_json params_json(const ClusteringParams& params);

}  // namespace qclust
