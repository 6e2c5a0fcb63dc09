#pragma once

#include "qclust/clustering.hpp"
#include "qclust/dataset.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qclust::cli {

/// Invalid flag combination or value; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;  // qhca | unsharp | agglomerative | divisive | bench

  std::optional<std::string> tsplib;
  std::optional<std::string> wbc;
  std::optional<std::string> circles;  // "n=400,factor=0.5,noise=0.1,seed=7"
  std::string missing = "drop";
  bool pca = false;
  std::optional<bool> standardize;

  std::optional<std::size_t> k;
  std::optional<int> ancillae;
  std::optional<double> d_min;
  std::optional<double> delta;
  std::optional<double> kappa;
  std::optional<double> scale;
  std::optional<int> auto_scale;
  std::optional<std::string> origin;  // farthest | fixed:x,y | index:i
  std::optional<std::string> weighting;
  std::optional<std::string> center;
  std::optional<std::string> stop;
  std::optional<std::string> linkage;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> shots;

  std::optional<std::string> csv;
  std::optional<std::string> svg;
  std::optional<std::string> metrics;
  std::vector<std::size_t> sizes;
  std::optional<std::string> bench_csv;
  std::optional<int> repeats;

  int max_qubits = 24;
};

/// Flat JSON mirroring the command-line flags; valid input for --config.
nlohmann::ordered_json to_json(const RunConfig& config);

/// Parses argv-style arguments (without the program name). Honors --config FILE,
/// whose keys are flag names; explicit flags override the file.
RunConfig parse_args(const std::vector<std::string>& args);

struct RunOutcome {
  Dataset dataset;
  Clustering clustering;
  nlohmann::ordered_json metrics;
  std::string summary;
};

/// Ingestion, optional PCA, clustering, scoring, and requested outputs.
RunOutcome execute(const RunConfig& config);

struct BenchRow {
  std::string algorithm;
  std::size_t n;
  double seconds;
};

/// Per-size wall time of every algorithm on generated circles; writes CSV if requested.
std::vector<BenchRow> bench(const RunConfig& config);
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Full command-line entry point: returns 0 on success, 1 on runtime errors,
/// 2 on usage errors. Diagnostics go to `err` only.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Register cap, from CLUSTER_MAX_QUBITS when set.
int max_qubits_from_env();

CirclesSpec parse_circles_spec(const std::string& text);

}  // namespace qclust::cli
