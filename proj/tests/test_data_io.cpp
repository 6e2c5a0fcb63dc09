#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qclust/dataset.hpp"
#include "qclust/json_io.hpp"
#include "qclust/qhca.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

using namespace qclust;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qclust_data_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kTwoNodes =
    "NAME : pair\n"
    "TYPE : TSP\n"
    "DIMENSION : 2\n"
    "EDGE_WEIGHT_TYPE : EUC_2D\n"
    "NODE_COORD_SECTION\n"
    "1 334.5909245845 161.7809319139\n"
    "2 397.6446634067 262.8165330708\n"
    "EOF\n";

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("minimal TSPLIB file") {
  std::istringstream in(kTwoNodes);
  const Dataset d = parse_tsplib(in);
  CHECK(d.name == "pair");
  REQUIRE(d.size() == 2);
  CHECK(d.points(0, 0) == 334.5909245845);
  CHECK(d.points(1, 1) == 262.8165330708);
  CHECK(d.label_kind == LabelKind::None);
}

TEST_CASE("TSPLIB errors carry line numbers") {
  auto fails_at = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      parse_tsplib(in);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
      return;
    }
    FAIL("expected a parse error");
  };
  fails_at("NAME : x\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF\n", 7);
  fails_at("NAME : x\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 abc\n", 6);
  fails_at("NAME : x\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : GEO\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n", 3);
  std::istringstream none("NAME : x\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\n");
  CHECK_THROWS_WITH_AS(parse_tsplib(none), doctest::Contains("NODE_COORD_SECTION"), ParseError);
}

TEST_CASE("TSPLIB round trip") {
  Dataset d;
  d.name = "rt";
  d.points = Points::Random(17, 2) * 500.0;
  d.points(3, 0) = 0.1 + 0.2;
  std::ostringstream out;
  write_tsplib(d, out);
  std::istringstream in(out.str());
  const Dataset back = parse_tsplib(in);
  CHECK(back.name == "rt");
  CHECK(back.points == d.points);
}

TEST_CASE("WBC rows") {
  std::istringstream one("1000025,5,1,1,1,2,1,3,1,1,2\n1002945,5,4,4,5,7,10,3,2,1,4\n1057013,8,4,5,1,2,?,7,3,1,4\n");
  const Dataset d = load_wbc_csv(one);
  REQUIRE(d.size() == 2);
  Eigen::RowVectorXd first(9);
  first << 5, 1, 1, 1, 2, 1, 3, 1, 1;
  CHECK(d.points.row(0) == first);
  CHECK(d.binary_labels()[0] == BinaryLabel::Positive);
  CHECK(d.binary_labels()[1] == BinaryLabel::Negative);

  std::istringstream again(one.str());
  const Dataset imputed = load_wbc_csv(again, MissingPolicy::ImputeMode);
  CHECK(imputed.size() == 3);

  std::istringstream empty("");
  CHECK_THROWS_AS(load_wbc_csv(empty), ParseError);
  std::istringstream bad_class("1,1,1,1,1,1,1,1,1,1,3\n");
  CHECK_THROWS_WITH(load_wbc_csv(bad_class), doctest::Contains("class"));
  std::istringstream short_row("1000025,5,1,1,1,2,1,3,1,1,2\n1,2,3\n");
  try {
    load_wbc_csv(short_row);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("bundled WBC file") {
  const Dataset d = load_wbc(fs::path(QCLUST_DATA_DIR) / "breast-cancer-wisconsin.data");
  CHECK(d.size() == 683);
  CHECK(d.points.cols() == 9);
  CHECK(d.points.minCoeff() >= 1.0);
  CHECK(d.points.maxCoeff() <= 10.0);
  std::size_t benign = 0;
  for (int l : d.labels) benign += l == 1;
  CHECK(benign == 444);
  CHECK(d.provenance.at("rows_with_missing") == "16");

  const Dataset all = load_wbc(fs::path(QCLUST_DATA_DIR) / "breast-cancer-wisconsin.data", MissingPolicy::ImputeMode);
  CHECK(all.size() == 699);
}

TEST_CASE("circles generator") {
  const Dataset clean = gen_circles({4, 0.5, 0.0, 1});
  REQUIRE(clean.size() == 4);
  CHECK(clean.labels == std::vector<int>{0, 0, 1, 1});
  for (std::size_t i = 0; i < 4; ++i) {
    const double r = clean.points.row(static_cast<Eigen::Index>(i)).norm();
    CHECK(r == doctest::Approx(clean.labels[i] == 0 ? 1.0 : 0.5).epsilon(1e-15));
  }
  const Dataset odd = gen_circles({7, 0.3, 0.0, 2});
  CHECK(std::count(odd.labels.begin(), odd.labels.end(), 0) == 3);

  const Dataset a = gen_circles({400, 0.5, 0.1, 7});
  const Dataset b = gen_circles({400, 0.5, 0.1, 7});
  const Dataset c = gen_circles({400, 0.5, 0.1, 8});
  CHECK(a.points == b.points);
  CHECK(a.points != c.points);
  CHECK(a.provenance.at("seed") == "7");
  CHECK_THROWS(gen_circles({1, 0.5, 0.1, 0}));
  CHECK_THROWS(gen_circles({10, 1.5, 0.1, 0}));
}

TEST_CASE("clustering CSV round trip and sidecar") {
  const Dataset d = gen_circles({50, 0.5, 0.1, 3});
  QhcaConfig config;
  config.ancillae = AncillaCount{2};
  config.encoding.scale = ExplicitScale{10.0};
  const Clustering c = qhca_run(d.points, config);
  const fs::path csv = scratch("rt.csv");
  write_clustering(c, d, csv, R"({"subcommand":"qhca","ancillae":2})");
  CHECK(read_clustering_assignments(csv) == c.assignments);
  const std::string text = slurp(csv);
  CHECK(text.rfind("point_id,x0,x1,cluster,true_label\n", 0) == 0);
  CHECK(count(text, "\n") == 51);

  const auto side = nlohmann::json::parse(slurp(sidecar_path(csv)));
  CHECK(side["subcommand"] == "qhca");
  CHECK(side["result"]["m"] == 2);
  CHECK(side["result"]["scale"] == 10.0);
  CHECK(side["result"]["algorithm"] == "qhca");

  Dataset unlabeled = d;
  unlabeled.label_kind = LabelKind::None;
  unlabeled.labels.clear();
  CHECK(clustering_csv(c, unlabeled).rfind("point_id,x0,x1,cluster\n", 0) == 0);
  CHECK_THROWS(write_clustering(c, d, fs::path("/nonexistent-dir/x.csv")));
}

TEST_CASE("SVG scatter") {
  Dataset d;
  d.points.resize(3, 2);
  d.points << 0, 0, 1, 1, 2, 0.5;
  const Clustering c = clustering_from_labels({0, 1, 1});
  const std::string svg = render_svg_scatter(d, c);
  CHECK(count(svg, "<circle") == 3);
  std::set<std::string> fills;
  const std::regex fill_re("<circle[^>]*fill=\"([^\"]+)\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), fill_re); it != std::sregex_iterator(); ++it)
    fills.insert((*it)[1]);
  CHECK(fills.size() == 2);
  CHECK(svg == render_svg_scatter(d, c));
  CHECK(svg.rfind("<svg", 0) == 0);

  const fs::path out = scratch("s.svg");
  emit_svg_scatter(d, c, out);
  CHECK(slurp(out) == svg);

  Dataset five;
  five.points = Points::Zero(3, 5);
  CHECK_THROWS_WITH(render_svg_scatter(five, c), doctest::Contains("--pca"));
}

TEST_CASE("number formatting round trips") {
  for (double v : {0.1, 1.0 / 3.0, 938.842, -2.5e-300, 12.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(12.0) == "12");
}
