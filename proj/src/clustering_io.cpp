#include "qclust/dataset.hpp"
#include "qclust/json_io.hpp"

#include <fstream>

namespace qclust {

nlohmann::ordered_json params_json(const ClusteringParams& params) {
  nlohmann::ordered_json j;
  j["algorithm"] = params.algorithm;
  if (!params.origin.empty()) j["origin"] = params.origin;
  if (params.origin_index) j["origin_index"] = *params.origin_index;
  if (params.scale) j["scale"] = *params.scale;
  if (params.n) j["n"] = *params.n;
  if (params.m) j["m"] = *params.m;
  if (params.delta) j["delta"] = *params.delta;
  if (params.kappa) j["kappa"] = *params.kappa;
  if (params.seed) j["seed"] = *params.seed;
  if (params.weighting) j["weighting"] = *params.weighting;
  if (params.linkage) j["linkage"] = *params.linkage;
  return j;
}

void write_clustering(const Clustering& clustering, const Dataset& dataset,
                      const std::filesystem::path& csv_path, const std::string& run_config_json) {
  auto sidecar = nlohmann::ordered_json::parse(run_config_json.empty() ? "{}" : run_config_json);
  if (!sidecar.is_object()) throw std::invalid_argument("run config must be a JSON object");
  auto result = params_json(clustering.params);
  result["clusters"] = clustering.cluster_count();
  result["points"] = clustering.size();
  sidecar["result"] = std::move(result);

  const std::string csv = clustering_csv(clustering, dataset);
  for (const auto& [path, text] : {std::pair{csv_path, csv},
                                   std::pair{sidecar_path(csv_path), sidecar.dump(2) + "\n"}}) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path.string());
  }
}

}  // namespace qclust
