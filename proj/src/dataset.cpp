#include "qclust/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string_view>

namespace qclust {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  double value = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<long long> to_int(std::string_view s) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string format_fixed(double value, int digits) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                       std::chars_format::fixed, digits);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  std::string out(buf.data(), ptr);
  if (out == "-0.00" || out == "-0.0" || out == "-0") out.erase(0, 1);
  return out;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

std::vector<BinaryLabel> Dataset::binary_labels() const {
  if (label_kind != LabelKind::Binary) throw std::logic_error("dataset " + name + " has no class labels");
  std::vector<BinaryLabel> out;
  out.reserve(labels.size());
  for (int l : labels) out.push_back(l == 1 ? BinaryLabel::Positive : BinaryLabel::Negative);
  return out;
}

// ---- TSPLIB ----------------------------------------------------------------

Dataset parse_tsplib(std::istream& in) {
  Dataset ds;
  ds.provenance["format"] = "tsplib";
  std::optional<std::size_t> dimension;
  std::size_t dimension_line = 0;
  std::string line;
  std::size_t line_no = 0;
  bool in_coords = false;
  bool saw_section = false;
  std::vector<std::array<double, 2>> coords;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (upper(text) == "EOF") break;

    if (in_coords) {
      const auto fields = split_ws(text);
      if (fields.size() != 3) {
        // a new keyword ends the coordinate section
        if (!fields.empty() && !to_double(fields[0])) {
          in_coords = false;
        } else {
          throw ParseError(line_no, "expected 'index x y', got '" + std::string(text) + "'");
        }
      } else {
        const auto x = to_double(fields[1]);
        const auto y = to_double(fields[2]);
        if (!to_int(fields[0]) || !x || !y) {
          throw ParseError(line_no, "non-numeric node coordinate row '" + std::string(text) + "'");
        }
        coords.push_back({*x, *y});
        continue;
      }
    }

    const std::string key_upper = upper(text);
    if (key_upper == "NODE_COORD_SECTION") {
      in_coords = true;
      saw_section = true;
      continue;
    }
    if (key_upper.ends_with("_SECTION")) {
      throw ParseError(line_no, "unsupported section " + std::string(text));
    }
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(line_no, "expected 'KEY : value' header line, got '" + std::string(text) + "'");
    }
    const std::string key = upper(trim(text.substr(0, colon)));
    const std::string value(trim(text.substr(colon + 1)));
    if (key == "NAME") {
      ds.name = value;
    } else if (key == "DIMENSION") {
      const auto dim = to_int(value);
      if (!dim || *dim < 1) throw ParseError(line_no, "invalid DIMENSION '" + value + "'");
      dimension = static_cast<std::size_t>(*dim);
      dimension_line = line_no;
    } else if (key == "EDGE_WEIGHT_TYPE") {
      if (upper(value) != "EUC_2D") {
        throw ParseError(line_no, "only EUC_2D instances are supported, got " + value);
      }
    } else if (key == "TYPE") {
      if (upper(value) != "TSP") throw ParseError(line_no, "unsupported TSPLIB TYPE " + value);
    }
    // COMMENT and other informational keys are ignored
  }

  if (!saw_section) throw ParseError(line_no, "missing NODE_COORD_SECTION");
  if (coords.empty()) throw ParseError(line_no, "NODE_COORD_SECTION has no rows");
  if (dimension && *dimension != coords.size()) {
    throw ParseError(line_no, "DIMENSION " + std::to_string(*dimension) + " (line " +
                                  std::to_string(dimension_line) + ") but the coordinate section has " +
                                  std::to_string(coords.size()) + " rows");
  }
  ds.points.resize(static_cast<Eigen::Index>(coords.size()), 2);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    ds.points(static_cast<Eigen::Index>(i), 0) = coords[i][0];
    ds.points(static_cast<Eigen::Index>(i), 1) = coords[i][1];
  }
  if (ds.name.empty()) ds.name = "tsplib";
  return ds;
}

Dataset load_tsplib(const std::filesystem::path& path) {
  auto in = open_input(path);
  Dataset ds = parse_tsplib(in);
  ds.provenance["source"] = path.string();
  return ds;
}

void write_tsplib(const Dataset& dataset, std::ostream& out) {
  if (dataset.points.cols() != 2) throw std::invalid_argument("TSPLIB EUC_2D needs 2-D points");
  out << "NAME : " << dataset.name << '\n'
      << "TYPE : TSP\n"
      << "DIMENSION : " << dataset.size() << '\n'
      << "EDGE_WEIGHT_TYPE : EUC_2D\n"
      << "NODE_COORD_SECTION\n";
  for (Eigen::Index i = 0; i < dataset.points.rows(); ++i) {
    out << (i + 1) << ' ' << format_double(dataset.points(i, 0)) << ' '
        << format_double(dataset.points(i, 1)) << '\n';
  }
  out << "EOF\n";
}

// ---- WBC -------------------------------------------------------------------

Dataset load_wbc_csv(std::istream& in, MissingPolicy policy) {
  constexpr int kAttributes = 9;
  struct Row {
    std::array<int, kAttributes> values;  // 0 marks missing
    int label;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t missing_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      fields.push_back(trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != kAttributes + 2) {
      throw ParseError(line_no, "expected 11 comma-separated fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(line_no, "empty sample id");
    Row row{};
    bool missing = false;
    for (int a = 0; a < kAttributes; ++a) {
      const std::string_view f = fields[static_cast<std::size_t>(a) + 1];
      if (f == "?") {
        row.values[static_cast<std::size_t>(a)] = 0;
        missing = true;
        continue;
      }
      const auto v = to_int(f);
      if (!v || *v < 1 || *v > 10) {
        throw ParseError(line_no, "attribute " + std::to_string(a + 1) + " is not an integer in 1..10: '" +
                                      std::string(f) + "'");
      }
      row.values[static_cast<std::size_t>(a)] = static_cast<int>(*v);
    }
    const auto cls = to_int(fields[kAttributes + 1]);
    if (!cls || (*cls != 2 && *cls != 4)) {
      throw ParseError(line_no, "unknown class code '" + std::string(fields[kAttributes + 1]) + "'");
    }
    row.label = *cls == 2 ? 1 : 0;
    missing_rows += missing;
    if (missing && policy == MissingPolicy::Drop) continue;
    rows.push_back(row);
  }
  if (line_no == 0 || (rows.empty() && missing_rows == 0)) throw ParseError(0, "empty WBC input");
  if (rows.empty()) throw ParseError(0, "every WBC row has missing values");

  if (policy == MissingPolicy::ImputeMode) {
    for (std::size_t a = 0; a < kAttributes; ++a) {
      std::array<std::size_t, 11> counts{};
      for (const Row& r : rows) ++counts[static_cast<std::size_t>(r.values[a])];
      int mode = 1;
      for (int v = 2; v <= 10; ++v) {
        if (counts[static_cast<std::size_t>(v)] > counts[static_cast<std::size_t>(mode)]) mode = v;
      }
      for (Row& r : rows) {
        if (r.values[a] == 0) r.values[a] = mode;
      }
    }
  }

  Dataset ds;
  ds.name = "wbc";
  ds.label_kind = LabelKind::Binary;
  ds.points.resize(static_cast<Eigen::Index>(rows.size()), kAttributes);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int a = 0; a < kAttributes; ++a) {
      ds.points(static_cast<Eigen::Index>(i), a) = rows[i].values[static_cast<std::size_t>(a)];
    }
    ds.labels.push_back(rows[i].label);
  }
  ds.provenance["format"] = "wbc";
  ds.provenance["missing_policy"] = policy == MissingPolicy::Drop ? "drop" : "impute-mode";
  ds.provenance["rows_with_missing"] = std::to_string(missing_rows);
  return ds;
}

Dataset load_wbc(const std::filesystem::path& path, MissingPolicy policy) {
  auto in = open_input(path);
  Dataset ds = load_wbc_csv(in, policy);
  ds.provenance["source"] = path.string();
  return ds;
}

// ---- circles ---------------------------------------------------------------

Dataset gen_circles(const CirclesSpec& spec) {
  if (spec.n_samples < 2) throw std::invalid_argument("circles need at least 2 samples");
  if (!(spec.factor > 0.0 && spec.factor < 1.0)) throw std::invalid_argument("circle factor must lie in (0, 1)");
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
    throw std::invalid_argument("noise sigma must be nonnegative");
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const std::size_t outer = spec.n_samples / 2;

  Dataset ds;
  ds.name = "circles";
  ds.label_kind = LabelKind::Ring;
  ds.points.resize(static_cast<Eigen::Index>(spec.n_samples), 2);
  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    const bool inner = i >= outer;
    const double radius = inner ? spec.factor : 1.0;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double x = radius * std::cos(angle);
    double y = radius * std::sin(angle);
    if (spec.noise_sigma > 0.0) {
      x += spec.noise_sigma * noise(rng);
      y += spec.noise_sigma * noise(rng);
    }
    ds.points(static_cast<Eigen::Index>(i), 0) = x;
    ds.points(static_cast<Eigen::Index>(i), 1) = y;
    ds.labels.push_back(inner ? 1 : 0);
  }
  ds.provenance["format"] = "circles";
  ds.provenance["n_samples"] = std::to_string(spec.n_samples);
  ds.provenance["factor"] = format_double(spec.factor);
  ds.provenance["noise"] = format_double(spec.noise_sigma);
  ds.provenance["seed"] = std::to_string(spec.seed);
  return ds;
}

// ---- outputs ---------------------------------------------------------------

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  std::filesystem::path out = csv_path;
  out += ".json";
  return out;
}

std::string clustering_csv(const Clustering& clustering, const Dataset& dataset) {
  if (clustering.size() != dataset.size()) {
    throw std::invalid_argument("clustering and dataset sizes differ");
  }
  std::ostringstream os;
  os << "point_id";
  for (Eigen::Index j = 0; j < dataset.points.cols(); ++j) os << ",x" << j;
  os << ",cluster";
  const bool labeled = dataset.label_kind != LabelKind::None;
  if (labeled) os << ",true_label";
  os << '\n';
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    os << i;
    for (Eigen::Index j = 0; j < dataset.points.cols(); ++j) {
      os << ',' << format_double(dataset.points(static_cast<Eigen::Index>(i), j));
    }
    os << ',' << clustering.assignments[i];
    if (labeled) os << ',' << dataset.labels[i];
    os << '\n';
  }
  return os.str();
}

std::vector<int> read_clustering_assignments(const std::filesystem::path& csv_path) {
  auto in = open_input(csv_path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(0, "clustering CSV is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const auto col = std::find(header.begin(), header.end(), "cluster");
  if (col == header.end()) throw ParseError(1, "no 'cluster' column");
  const auto index = static_cast<std::size_t>(col - header.begin());
  std::vector<int> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    std::optional<long long> value;
    while (std::getline(ss, cell, ',')) {
      if (c++ == index) value = to_int(trim(cell));
    }
    if (!value) throw ParseError(line_no, "missing or non-integer cluster value");
    out.push_back(static_cast<int>(*value));
  }
  return out;
}

std::string render_svg_scatter(const Dataset& dataset, const Clustering& clustering) {
  if (dataset.points.cols() != 2) {
    throw std::invalid_argument("scatter plots need 2-D points; project the data with --pca first");
  }
  if (clustering.size() != dataset.size()) throw std::invalid_argument("clustering and dataset sizes differ");
  static constexpr std::array<const char*, 8> kPalette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  constexpr double kSize = 480.0;
  constexpr double kMargin = 48.0;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (dataset.size() > 0) {
    xmin = dataset.points.col(0).minCoeff();
    xmax = dataset.points.col(0).maxCoeff();
    ymin = dataset.points.col(1).minCoeff();
    ymax = dataset.points.col(1).maxCoeff();
  }
  const double xspan = xmax > xmin ? xmax - xmin : 1.0;
  const double yspan = ymax > ymin ? ymax - ymin : 1.0;
  const double inner = kSize - 2 * kMargin;
  auto px = [&](double x) { return kMargin + (x - xmin) / xspan * inner; };
  auto py = [&](double y) { return kSize - kMargin - (y - ymin) / yspan * inner; };

  std::ostringstream os;
  const std::string size = format_fixed(kSize, 0);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const std::string lo = format_fixed(kMargin, 2), hi = format_fixed(kSize - kMargin, 2);
  os << "<line x1=\"" << lo << "\" y1=\"" << hi << "\" x2=\"" << hi << "\" y2=\"" << hi
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << lo << "\" y1=\"" << hi << "\" x2=\"" << lo << "\" y2=\"" << lo
     << "\" stroke=\"black\"/>\n";
  auto tick_text = [&](double x, double y, const char* anchor, double value) {
    os << "<text x=\"" << format_fixed(x, 2) << "\" y=\"" << format_fixed(y, 2)
       << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"" << anchor << "\">"
       << format_fixed(value, 3) << "</text>\n";
  };
  tick_text(kMargin, kSize - kMargin + 16, "start", xmin);
  tick_text(kSize - kMargin, kSize - kMargin + 16, "end", xmax);
  tick_text(kMargin - 6, kSize - kMargin, "end", ymin);
  tick_text(kMargin - 6, kMargin + 4, "end", ymax);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const int label = clustering.assignments[i];
    os << "<circle cx=\"" << format_fixed(px(dataset.points(row, 0)), 2) << "\" cy=\""
       << format_fixed(py(dataset.points(row, 1)), 2) << "\" r=\"3\" fill=\""
       << kPalette[static_cast<std::size_t>(label) % kPalette.size()] << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_svg_scatter(const Dataset& dataset, const Clustering& clustering,
                      const std::filesystem::path& path) {
  write_file(path, render_svg_scatter(dataset, clustering));
}

}  // namespace qclust
