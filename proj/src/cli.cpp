#include "qclust/cli.hpp"

#include "qclust/analysis.hpp"
#include "qclust/json_io.hpp"
#include "qclust/qhca.hpp"
#include "qclust/unsharp.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace qclust::cli {

namespace {

class HelpRequested : public std::runtime_error {
 public:
  explicit HelpRequested(std::string text) : std::runtime_error("help"), text_(std::move(text)) {}
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

const std::set<std::string> kSubcommands = {"qhca", "unsharp", "agglomerative", "divisive", "bench"};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  T value{};
  if (!(is >> value) || !(is >> std::ws).eof()) throw UsageError("invalid " + what + " '" + text + "'");
  return value;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Converts a flat config object into command-line tokens.
std::vector<std::string> config_tokens(const nlohmann::json& config) {
  if (!config.is_object()) throw UsageError("config file must hold a flat JSON object");
  std::vector<std::string> tokens;
  for (const auto& [key, value] : config.items()) {
    if (key == "subcommand" || key == "result") continue;
    const std::string flag = "--" + key;
    if (value.is_null()) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) {
        tokens.push_back(flag);
      } else if (key == "standardize") {
        tokens.push_back("--no-standardize");
      }
      continue;
    }
    tokens.push_back(flag);
    if (value.is_string()) {
      tokens.push_back(value.get<std::string>());
    } else if (value.is_number_integer() || value.is_number_unsigned()) {
      tokens.push_back(value.dump());
    } else if (value.is_number_float()) {
      tokens.push_back(format_double(value.get<double>()));
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ',';
        joined += item.is_string() ? item.get<std::string>() : item.dump();
      }
      tokens.push_back(joined);
    } else {
      throw UsageError("config key '" + key + "' has an unsupported value");
    }
  }
  return tokens;
}

OriginPolicy parse_origin(const std::string& text, const Dataset& dataset) {
  if (text == "farthest") return FarthestEndpointOrigin{};
  if (text.rfind("index:", 0) == 0) {
    const auto index = parse_number<std::size_t>(text.substr(6), "origin index");
    if (index >= dataset.size()) throw UsageError("origin index " + std::to_string(index) + " out of range");
    return IndexOrigin{index};
  }
  if (text.rfind("fixed:", 0) == 0) {
    const auto parts = split(text.substr(6), ',');
    if (static_cast<Eigen::Index>(parts.size()) != dataset.points.cols()) {
      throw UsageError("fixed origin needs " + std::to_string(dataset.points.cols()) + " coordinates");
    }
    Eigen::VectorXd coords(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
      coords[static_cast<Eigen::Index>(i)] = parse_number<double>(parts[i], "origin coordinate");
    }
    return FixedOrigin{coords};
  }
  throw UsageError("origin must be 'farthest', 'fixed:x,y,...' or 'index:i', got '" + text + "'");
}

Weighting parse_weighting(const std::optional<std::string>& text) {
  if (!text || *text == "uniform-distinct") return Weighting::UniformDistinct;
  if (*text == "multiplicity") return Weighting::Multiplicity;
  throw UsageError("weighting must be 'uniform-distinct' or 'multiplicity'");
}

EncodingOptions encoding_options(const RunConfig& config, const Dataset& dataset) {
  EncodingOptions options;
  options.max_qubits = config.max_qubits;
  if (config.origin) {
    options.origin = parse_origin(*config.origin, dataset);
  } else if (dataset.label_kind == LabelKind::Ring) {
    // generated rings are centered on the coordinate origin
    options.origin = FixedOrigin{Eigen::VectorXd::Zero(dataset.points.cols())};
  }
  if (config.auto_scale) {
    options.scale = AutoFitScale{*config.auto_scale};
  } else {
    options.scale = ExplicitScale{config.scale.value_or(1.0)};
  }
  return options;
}

void forbid(const RunConfig& c, const std::string& sub, bool present, const char* flag) {
  if (present) throw UsageError("--" + std::string(flag) + " is not valid with '" + sub + "'");
}

void validate(const RunConfig& c) {
  const std::string& sub = c.subcommand;
  const int sources = (c.tsplib ? 1 : 0) + (c.wbc ? 1 : 0) + (c.circles ? 1 : 0);
  if (sources != 1) throw UsageError("exactly one of --tsplib, --wbc, --circles is required");
  if (c.missing != "drop" && c.missing != "impute-mode") {
    throw UsageError("--missing must be 'drop' or 'impute-mode'");
  }
  if (c.missing != "drop" && !c.wbc) throw UsageError("--missing only applies to --wbc");
  if (c.standardize && !c.pca) throw UsageError("--standardize only applies together with --pca");
  if (c.scale && c.auto_scale) throw UsageError("--scale and --auto-scale are mutually exclusive");
  if (c.k && *c.k < 1) throw UsageError("--k must be at least 1");
  if (c.ancillae && *c.ancillae < 1) throw UsageError("--ancillae must be at least 1");
  if (c.ancillae && c.d_min) throw UsageError("--ancillae and --d-min are mutually exclusive");
  if (c.d_min && !(*c.d_min > 0)) throw UsageError("--d-min must be positive");
  if (c.delta && !(*c.delta > 0)) throw UsageError("--delta must be positive");
  if (c.kappa && !(*c.kappa > 0)) throw UsageError("--kappa must be positive");
  if (c.scale && !(*c.scale > 0)) throw UsageError("--scale must be positive");
  if (c.auto_scale && *c.auto_scale < 1) throw UsageError("--auto-scale must be at least 1");
  if (c.shots && *c.shots < 1) throw UsageError("--shots must be at least 1");
  if (c.repeats && *c.repeats < 1) throw UsageError("--repeats must be at least 1");
  parse_weighting(c.weighting);
  if (c.center && *c.center != "lowest-unassigned" && *c.center != "highest-amplitude") {
    throw UsageError("--center must be 'lowest-unassigned' or 'highest-amplitude'");
  }
  if (c.stop && *c.stop != "at-k" && *c.stop != "exhaust-then-merge") {
    throw UsageError("--stop must be 'at-k' or 'exhaust-then-merge'");
  }
  if (c.linkage && *c.linkage != "single" && *c.linkage != "complete") {
    throw UsageError("--linkage must be 'single' or 'complete'");
  }
  if (c.circles) parse_circles_spec(*c.circles);

  const bool quantum_params = c.delta || c.kappa || c.center || c.stop || c.ancillae || c.d_min ||
                              c.scale || c.auto_scale || c.origin || c.weighting || c.shots;
  if (sub != "bench") {
    forbid(c, sub, !c.sizes.empty(), "sizes");
    forbid(c, sub, c.bench_csv.has_value(), "bench-csv");
    forbid(c, sub, c.repeats.has_value(), "repeats");
  }
  if (sub == "qhca") {
    forbid(c, sub, c.delta.has_value(), "delta");
    forbid(c, sub, c.kappa.has_value(), "kappa");
    forbid(c, sub, c.center.has_value(), "center");
    forbid(c, sub, c.stop.has_value(), "stop");
    forbid(c, sub, c.linkage.has_value(), "linkage");
    if (!c.ancillae && !c.d_min) throw UsageError("qhca needs --ancillae or --d-min");
  } else if (sub == "unsharp") {
    forbid(c, sub, c.ancillae.has_value(), "ancillae");
    forbid(c, sub, c.d_min.has_value(), "d-min");
    forbid(c, sub, c.shots.has_value(), "shots");
    forbid(c, sub, c.linkage.has_value(), "linkage");
    if (!c.delta && !c.k) throw UsageError("unsharp needs --delta or --k (for the automatic delta)");
  } else if (sub == "agglomerative" || sub == "divisive") {
    if (quantum_params) {
      throw UsageError("'" + sub + "' takes only --k" + (sub == "agglomerative" ? " and --linkage" : ""));
    }
    if (sub == "divisive") forbid(c, sub, c.linkage.has_value(), "linkage");
    if (!c.k) throw UsageError("'" + sub + "' needs --k");
  } else if (sub == "bench") {
    if (!c.circles) throw UsageError("bench runs on generated data only; use --circles");
    if (c.sizes.empty()) throw UsageError("bench needs --sizes N1,N2,...");
    forbid(c, sub, c.csv.has_value(), "csv");
    forbid(c, sub, c.svg.has_value(), "svg");
    forbid(c, sub, c.metrics.has_value(), "metrics");
    forbid(c, sub, c.shots.has_value(), "shots");
    for (std::size_t n : c.sizes) {
      if (n < 2) throw UsageError("bench sizes must be at least 2");
    }
  }
}

Dataset load_dataset(const RunConfig& c) {
  if (c.tsplib) return load_tsplib(*c.tsplib);
  if (c.wbc) return load_wbc(*c.wbc, c.missing == "drop" ? MissingPolicy::Drop : MissingPolicy::ImputeMode);
  return gen_circles(parse_circles_spec(*c.circles));
}

Clustering qhca_with_shots(const Dataset& dataset, const RunConfig& c, const QhcaConfig& qc) {
  const DistanceEncoding encoding = encode(dataset.points, qc.encoding);
  const int m = resolve_ancillae(qc.ancillae, encoding);
  const StateVector labeled = qhca_labeled_state(encoding, m, qc.weighting, qc.encoding.max_qubits);
  const auto draws = sample_outcomes(labeled, *c.shots, c.seed.value_or(0));
  OutcomeDistribution observed;
  for (const Outcome& o : draws) observed[o] += 1.0 / static_cast<double>(draws.size());
  for (Code code : encoding.distinct_codes()) {
    const bool seen = std::any_of(observed.begin(), observed.end(),
                                  [&](const auto& entry) { return entry.first.code == code; });
    if (!seen) {
      throw std::runtime_error("distance code " + std::to_string(code) + " was never observed in " +
                               std::to_string(*c.shots) + " shots; increase --shots");
    }
  }
  Clustering clustering = extract_clusters(observed, encoding);
  if (qc.target_k && clustering.cluster_count() != *qc.target_k) {
    clustering = refine_to_k(clustering, encoding, *qc.target_k);
  }
  clustering.params.algorithm = "qhca";
  clustering.params.origin = describe(qc.encoding.origin);
  clustering.params.origin_index = encoding.origin_index;
  clustering.params.scale = encoding.scale;
  clustering.params.n = labeled.layout().n;
  clustering.params.m = m;
  clustering.params.weighting = qc.weighting == Weighting::Multiplicity ? "multiplicity" : "uniform-distinct";
  return clustering;
}

Clustering run_algorithm(const std::string& algorithm, const Dataset& dataset, const RunConfig& c) {
  if (algorithm == "qhca") {
    QhcaConfig qc;
    qc.target_k = c.k;
    if (c.d_min) {
      qc.ancillae = ClusterWidth{*c.d_min};
    } else {
      qc.ancillae = AncillaCount{c.ancillae.value_or(2)};
    }
    qc.encoding = encoding_options(c, dataset);
    qc.weighting = parse_weighting(c.weighting);
    if (c.shots) {
      Clustering out = qhca_with_shots(dataset, c, qc);
      out.params.seed = c.seed.value_or(0);
      return out;
    }
    Clustering out = qhca_run(dataset.points, qc);
    if (c.seed) out.params.seed = *c.seed;
    return out;
  }
  if (algorithm == "unsharp") {
    UnsharpConfig uc;
    uc.delta = c.delta;
    uc.kappa = c.kappa.value_or(1.0);
    uc.target_k = c.k;
    if (!uc.delta && !uc.target_k) uc.target_k = 2;
    uc.center = c.center && *c.center == "highest-amplitude" ? CenterPolicy::HighestAmplitude
                                                             : CenterPolicy::LowestUnassigned;
    uc.stop = c.stop && *c.stop == "exhaust-then-merge" ? StopRule::ExhaustThenMerge : StopRule::AtTargetK;
    uc.weighting = parse_weighting(c.weighting);
    uc.encoding = encoding_options(c, dataset);
    Clustering out = unsharp_run(dataset.points, uc);
    if (c.seed) out.params.seed = *c.seed;
    return out;
  }
  const std::size_t k = c.k.value_or(2);
  if (algorithm == "agglomerative") {
    const Linkage linkage = c.linkage && *c.linkage == "complete" ? Linkage::Complete : Linkage::Single;
    return agglomerative_baseline(dataset.points, k, linkage);
  }
  if (algorithm == "divisive") return divisive_baseline(dataset.points, k);
  throw UsageError("unknown algorithm '" + algorithm + "'");
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

int max_qubits_from_env() {
  const char* raw = std::getenv("CLUSTER_MAX_QUBITS");
  if (!raw || !*raw) return kDefaultMaxQubits;
  const int value = parse_number<int>(raw, "CLUSTER_MAX_QUBITS");
  if (value < 1 || value > 30) throw UsageError("CLUSTER_MAX_QUBITS must lie in [1, 30]");
  return value;
}

CirclesSpec parse_circles_spec(const std::string& text) {
  CirclesSpec spec;
  bool has_seed = false;
  for (const std::string& part : split(text, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw UsageError("circles spec entries look like key=value, got '" + part + "'");
    const std::string key = part.substr(0, eq);
    const std::string value = part.substr(eq + 1);
    if (key == "n") {
      spec.n_samples = parse_number<std::size_t>(value, "circles n");
    } else if (key == "factor") {
      spec.factor = parse_number<double>(value, "circles factor");
    } else if (key == "noise") {
      spec.noise_sigma = parse_number<double>(value, "circles noise");
    } else if (key == "seed") {
      spec.seed = parse_number<std::uint64_t>(value, "circles seed");
      has_seed = true;
    } else {
      throw UsageError("unknown circles spec key '" + key + "'");
    }
  }
  if (!has_seed) throw UsageError("circles spec needs an explicit seed=...");
  if (spec.n_samples < 2) throw UsageError("circles need n >= 2");
  if (!(spec.factor > 0 && spec.factor < 1)) throw UsageError("circles factor must lie in (0, 1)");
  if (!(spec.noise_sigma >= 0)) throw UsageError("circles noise must be nonnegative");
  return spec;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["subcommand"] = c.subcommand;
  if (c.tsplib) j["tsplib"] = *c.tsplib;
  if (c.wbc) {
    j["wbc"] = *c.wbc;
    j["missing"] = c.missing;
  }
  if (c.circles) j["circles"] = *c.circles;
  if (c.pca) j["pca"] = true;
  if (c.standardize) j["standardize"] = *c.standardize;
  if (c.k) j["k"] = *c.k;
  if (c.ancillae) j["ancillae"] = *c.ancillae;
  if (c.d_min) j["d-min"] = *c.d_min;
  if (c.delta) j["delta"] = *c.delta;
  if (c.kappa) j["kappa"] = *c.kappa;
  if (c.scale) j["scale"] = *c.scale;
  if (c.auto_scale) j["auto-scale"] = *c.auto_scale;
  if (c.origin) j["origin"] = *c.origin;
  if (c.weighting) j["weighting"] = *c.weighting;
  if (c.center) j["center"] = *c.center;
  if (c.stop) j["stop"] = *c.stop;
  if (c.linkage) j["linkage"] = *c.linkage;
  if (c.seed) j["seed"] = *c.seed;
  if (c.shots) j["shots"] = *c.shots;
  if (c.csv) j["csv"] = *c.csv;
  if (c.svg) j["svg"] = *c.svg;
  if (c.metrics) j["metrics"] = *c.metrics;
  if (!c.sizes.empty()) j["sizes"] = c.sizes;
  if (c.bench_csv) j["bench-csv"] = *c.bench_csv;
  if (c.repeats) j["repeats"] = *c.repeats;
  return j;
}

RunConfig parse_args(const std::vector<std::string>& raw_args) {
  std::vector<std::string> args;
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < raw_args.size(); ++i) {
    const std::string& a = raw_args[i];
    if (a == "--config") {
      if (i + 1 >= raw_args.size()) throw UsageError("--config needs a file path");
      config_path = raw_args[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      config_path = a.substr(9);
    } else {
      args.push_back(a);
    }
  }

  std::string subcommand;
  if (!args.empty() && kSubcommands.count(args.front())) {
    subcommand = args.front();
    args.erase(args.begin());
  }
  std::vector<std::string> from_config;
  if (config_path) {
    nlohmann::json config;
    try {
      config = nlohmann::json::parse(read_text(*config_path));
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config file " + *config_path + " is not valid JSON: " + e.what());
    }
    if (subcommand.empty() && config.is_object() && config.contains("subcommand")) {
      subcommand = config["subcommand"].get<std::string>();
    }
    from_config = config_tokens(config);
  }

  RunConfig c;
  c.max_qubits = max_qubits_from_env();
  std::string missing = "drop", tsplib, wbc, circles, origin, weighting, center, stop, linkage, csv,
              svg, metrics, sizes, bench_csv;
  std::size_t k = 0, shots = 0;
  int ancillae = 0, auto_scale = 0, repeats = 0;
  double d_min = 0, delta = 0, kappa = 0, scale = 0;
  std::uint64_t seed = 0;
  bool pca = false, standardize = false;

  CLI::App app{"Measurement-based clustering: QHCA, unsharp-measurement clustering and classical baselines",
               "cluster"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::map<std::string, CLI::Option*> opts;
  auto add_common = [&](CLI::App* sub) {
    opts["tsplib"] = sub->add_option("--tsplib", tsplib, "TSPLIB EUC_2D file");
    opts["wbc"] = sub->add_option("--wbc", wbc, "Wisconsin breast cancer CSV (UCI layout)");
    opts["circles"] = sub->add_option("--circles", circles, "Generated rings: n=400,factor=0.5,noise=0.1,seed=7");
    opts["missing"] = sub->add_option("--missing", missing, "WBC missing values: drop | impute-mode");
    opts["pca"] = sub->add_flag("--pca", pca, "Project features onto two principal components first");
    opts["standardize"] = sub->add_flag("--standardize,!--no-standardize", standardize,
                                        "Standardize features before PCA (default: on for WBC)");
    opts["k"] = sub->add_option("--k", k, "Target number of clusters");
    opts["ancillae"] = sub->add_option("--ancillae", ancillae, "QHCA ancilla count m");
    opts["d-min"] = sub->add_option("--d-min", d_min, "QHCA cluster width D_min (sets m)");
    opts["delta"] = sub->add_option("--delta", delta, "Unsharp window width in code units");
    opts["kappa"] = sub->add_option("--kappa", kappa, "Unsharp membership radius multiplier");
    opts["scale"] = sub->add_option("--scale", scale, "Distance scale factor before rounding");
    opts["auto-scale"] = sub->add_option("--auto-scale", auto_scale, "Fit the largest distance into this many qubits");
    opts["origin"] = sub->add_option("--origin", origin, "farthest | fixed:x,y,... | index:i");
    opts["weighting"] = sub->add_option("--weighting", weighting, "uniform-distinct | multiplicity");
    opts["center"] = sub->add_option("--center", center, "lowest-unassigned | highest-amplitude");
    opts["stop"] = sub->add_option("--stop", stop, "at-k | exhaust-then-merge");
    opts["linkage"] = sub->add_option("--linkage", linkage, "single | complete");
    opts["seed"] = sub->add_option("--seed", seed, "Seed for finite-shot sampling");
    opts["shots"] = sub->add_option("--shots", shots, "Sample this many readouts instead of exact probabilities");
    opts["csv"] = sub->add_option("--csv", csv, "Write assignments CSV (plus .json sidecar)");
    opts["svg"] = sub->add_option("--svg", svg, "Write a scatter plot");
    opts["metrics"] = sub->add_option("--metrics", metrics, "Write the metrics record as JSON");
    opts["sizes"] = sub->add_option("--sizes", sizes, "Bench sizes, comma separated");
    opts["bench-csv"] = sub->add_option("--bench-csv", bench_csv, "Bench timing table output");
    opts["repeats"] = sub->add_option("--repeats", repeats, "Minimum timed repetitions per bench cell");
  };
  add_common(app.add_subcommand("qhca", "Quantum hierarchical clustering by ancilla labels"));
  add_common(app.add_subcommand("unsharp", "Unsharp-measurement clustering with Gaussian effects"));
  add_common(app.add_subcommand("agglomerative", "Classical agglomerative baseline"));
  add_common(app.add_subcommand("divisive", "Classical bisecting divisive baseline"));
  add_common(app.add_subcommand("bench", "Wall-time scaling table on generated circles"));

  std::vector<std::string> tokens;
  if (!subcommand.empty()) tokens.push_back(subcommand);
  tokens.insert(tokens.end(), from_config.begin(), from_config.end());
  tokens.insert(tokens.end(), args.begin(), args.end());
  std::reverse(tokens.begin(), tokens.end());
  try {
    app.parse(tokens);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (CLI::App* sub : app.get_subcommands()) c.subcommand = sub->get_name();
  // options are shared across subcommands; re-read presence from the one that ran
  for (CLI::App* sub : app.get_subcommands()) {
    for (const CLI::Option* opt : sub->get_options()) {
      const std::string name = opt->get_single_name();
      if (opt->count() > 0) opts[name] = const_cast<CLI::Option*>(opt);
    }
  }
  auto given = [&](const char* name) { return opts.count(name) && opts[name]->count() > 0; };

  if (given("tsplib")) c.tsplib = tsplib;
  if (given("wbc")) c.wbc = wbc;
  if (given("circles")) c.circles = circles;
  c.missing = missing;
  c.pca = pca;
  if (given("standardize")) c.standardize = standardize;
  if (given("k")) c.k = k;
  if (given("ancillae")) c.ancillae = ancillae;
  if (given("d-min")) c.d_min = d_min;
  if (given("delta")) c.delta = delta;
  if (given("kappa")) c.kappa = kappa;
  if (given("scale")) c.scale = scale;
  if (given("auto-scale")) c.auto_scale = auto_scale;
  if (given("origin")) c.origin = origin;
  if (given("weighting")) c.weighting = weighting;
  if (given("center")) c.center = center;
  if (given("stop")) c.stop = stop;
  if (given("linkage")) c.linkage = linkage;
  if (given("seed")) c.seed = seed;
  if (given("shots")) c.shots = shots;
  if (given("csv")) c.csv = csv;
  if (given("svg")) c.svg = svg;
  if (given("metrics")) c.metrics = metrics;
  if (given("sizes")) {
    for (const std::string& s : split(sizes, ',')) c.sizes.push_back(parse_number<std::size_t>(s, "bench size"));
  }
  if (given("bench-csv")) c.bench_csv = bench_csv;
  if (given("repeats")) c.repeats = repeats;

  validate(c);
  return c;
}

RunOutcome execute(const RunConfig& c) {
  if (c.subcommand == "bench") throw UsageError("use bench() for the bench subcommand");
  RunOutcome outcome;
  outcome.dataset = load_dataset(c);
  Dataset& dataset = outcome.dataset;

  nlohmann::ordered_json metrics;
  metrics["subcommand"] = c.subcommand;
  metrics["dataset"] = dataset.name;
  metrics["points"] = dataset.size();
  metrics["features"] = dataset.points.cols();
  if (c.pca) {
    const bool standardize = c.standardize.value_or(dataset.label_kind == LabelKind::Binary);
    PcaResult pca = pca_2d(dataset.points, standardize);
    dataset.points = pca.projected;
    metrics["pca"] = {{"standardize", standardize},
                      {"explained", {pca.model.explained[0], pca.model.explained[1]}}};
  }

  const auto start = std::chrono::steady_clock::now();
  outcome.clustering = run_algorithm(c.subcommand, dataset, c);
  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  const Clustering& clustering = outcome.clustering;
  clustering.validate();

  metrics["clusters"] = clustering.cluster_count();
  std::vector<std::size_t> sizes;
  for (const Cluster& cl : clustering.clusters) sizes.push_back(cl.members.size());
  metrics["cluster_sizes"] = sizes;
  metrics["params"] = params_json(clustering.params);

  std::ostringstream summary;
  summary << c.subcommand << ": N=" << dataset.size() << " k=" << clustering.cluster_count();
  if (clustering.params.n) summary << " n=" << *clustering.params.n;
  if (clustering.params.m) summary << " m=" << *clustering.params.m;
  if (clustering.params.delta) summary << " delta=" << format_double(*clustering.params.delta);
  if (dataset.label_kind == LabelKind::Binary) {
    const auto labels = dataset.binary_labels();
    const BinaryScore score = score_binary(clustering, labels);
    metrics["accuracy"] = score.accuracy;
    metrics["confusion"] = {{"tp", score.counts.tp}, {"tn", score.counts.tn},
                            {"fp", score.counts.fp}, {"fn", score.counts.fn}};
    summary << " accuracy=" << fixed(score.accuracy, 4);
  } else if (dataset.label_kind == LabelKind::Ring) {
    const double purity = ring_purity(clustering, dataset.labels);
    metrics["purity"] = purity;
    summary << " purity=" << fixed(purity, 4);
  }
  summary << " time_ms=" << fixed(elapsed_ms, 3);

  if (c.csv) write_clustering(clustering, dataset, *c.csv, to_json(c).dump());
  if (c.svg) emit_svg_scatter(dataset, clustering, *c.svg);
  if (c.metrics) {
    std::ofstream out(*c.metrics, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + *c.metrics + " for writing");
    out << metrics.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing " + *c.metrics);
  }
  outcome.metrics = std::move(metrics);
  outcome.summary = summary.str();
  return outcome;
}

std::vector<BenchRow> bench(const RunConfig& c) {
  CirclesSpec base = parse_circles_spec(c.circles.value());
  const int min_repeats = c.repeats.value_or(3);
  std::vector<BenchRow> rows;
  for (const std::string algorithm : {"qhca", "unsharp", "agglomerative", "divisive"}) {
    for (std::size_t n : c.sizes) {
      CirclesSpec spec = base;
      spec.n_samples = n;
      const Dataset dataset = gen_circles(spec);
      int runs = 0;
      double total = 0.0;
      // repeat short cells so timer resolution does not dominate
      while (runs < min_repeats || (total < 0.05 && runs < 10000)) {
        const auto start = std::chrono::steady_clock::now();
        const Clustering result = run_algorithm(algorithm, dataset, c);
        total += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        ++runs;
        if (result.size() != n) throw std::logic_error("bench run lost points");
      }
      rows.push_back({algorithm, n, total / runs});
    }
  }
  if (c.bench_csv) {
    std::ofstream out(*c.bench_csv, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + *c.bench_csv + " for writing");
    out << bench_csv(rows);
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "algorithm,n,seconds\n";
  for (const BenchRow& r : rows) os << r.algorithm << ',' << r.n << ',' << format_double(r.seconds) << '\n';
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(args);
  } catch (const HelpRequested& help) {
    out << help.text();
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun 'cluster --help' for the list of flags.\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (config.subcommand == "bench") {
      const auto rows = bench(config);
      out << "algorithm        n      seconds\n";
      for (const BenchRow& r : rows) {
        out << std::left << std::setw(16) << r.algorithm << ' ' << std::right << std::setw(6) << r.n
            << ' ' << fixed(r.seconds, 6) << '\n';
      }
      return 0;
    }
    const RunOutcome outcome = execute(config);
    out << outcome.summary << '\n';
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qclust::cli
