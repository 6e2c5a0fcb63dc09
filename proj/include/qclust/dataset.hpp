#pragma once

#include "qclust/analysis.hpp"
#include "qclust/clustering.hpp"
#include "qclust/metric.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qclust {

enum class LabelKind { None, Binary, Ring };

struct Dataset {
  std::string name;
  Points points;
  LabelKind label_kind = LabelKind::None;
  std::vector<int> labels;  // Binary: 1 = positive, 0 = negative. Ring: ring id.
  std::map<std::string, std::string> provenance;

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
  std::vector<BinaryLabel> binary_labels() const;
};

/// Malformed input; line() is 1-based, 0 when no line applies.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// ---- TSPLIB (EUC_2D node coordinates) --------------------------------------

Dataset parse_tsplib(std::istream& in);
Dataset load_tsplib(const std::filesystem::path& path);
void write_tsplib(const Dataset& dataset, std::ostream& out);

// ---- Wisconsin breast cancer (UCI layout) ----------------------------------

enum class MissingPolicy { Drop, ImputeMode };

/// Rows "id,a1..a9,class" with attributes 1-10 or '?', class 2 (benign) or 4 (malignant).
Dataset load_wbc_csv(std::istream& in, MissingPolicy policy = MissingPolicy::Drop);
Dataset load_wbc(const std::filesystem::path& path, MissingPolicy policy = MissingPolicy::Drop);

// ---- concentric circles ----------------------------------------------------

struct CirclesSpec {
  std::size_t n_samples = 400;
  double factor = 0.5;
  double noise_sigma = 0.1;
  std::uint64_t seed = 0;
};

/// floor(n/2) points near the unit circle (ring 0), the rest near radius `factor`
/// (ring 1); uniform angles plus per-coordinate Gaussian noise.
Dataset gen_circles(const CirclesSpec& spec);

// ---- outputs ---------------------------------------------------------------

/// Sidecar location for a clustering CSV.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// CSV "point_id,x0..,cluster[,true_label]" plus a JSON sidecar holding
/// `run_config_json` (a flat JSON object, may be empty) and the clustering params.
void write_clustering(const Clustering& clustering, const Dataset& dataset,
                      const std::filesystem::path& csv_path,
                      const std::string& run_config_json = "{}");

std::string clustering_csv(const Clustering& clustering, const Dataset& dataset);

/// Reads the cluster column back from a CSV written by write_clustering.
std::vector<int> read_clustering_assignments(const std::filesystem::path& csv_path);

std::string render_svg_scatter(const Dataset& dataset, const Clustering& clustering);
void emit_svg_scatter(const Dataset& dataset, const Clustering& clustering,
                      const std::filesystem::path& path);

/// Shortest decimal text that round-trips the double.
std::string format_double(double value);

}  // namespace qclust
