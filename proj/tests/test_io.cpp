#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "teflow/teflow.hpp"

using namespace teflow;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = TEFLOW_FIXTURES;

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("teflow_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

template <typename F>
std::string error_text(F&& fn, ErrorCode expected) {
  try {
    fn();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), expected) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "no error thrown";
  return {};
}

}  // namespace

TEST(Csv, QuotingRoundTrip) {
  const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "", "Machinery, Heavy"};
  auto row = io::csv_row(fields);
  ASSERT_EQ(row.back(), '\n');
  row.pop_back();
  EXPECT_EQ(io::split_csv_line(row), fields);
  EXPECT_EQ(io::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(io::split_csv_line("a,\"b,c\",d"), (std::vector<std::string>{"a", "b,c", "d"}));
}

TEST(Csv, DoublesRoundTripExactly) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = n(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    EXPECT_EQ(io::parse_double(io::format_double(v), "v"), v);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
  const auto msg = error_text([] { io::parse_double("1.2x", "price of FOO"); }, ErrorCode::ParseError);
  EXPECT_NE(msg.find("price of FOO"), std::string::npos);
}

TEST(Inputs, FixtureManifestAndCalendar) {
  const auto series = io::read_manifest(kFixtures / "manifest.csv");
  ASSERT_EQ(series.size(), 3u);
  EXPECT_EQ(series[0].ticker, "ALPHA");
  EXPECT_EQ(series[1].meta.sub_industry, "Machinery, Heavy");
  const auto cal = io::read_calendar(kFixtures / "calendar.csv");
  EXPECT_EQ(cal.dates.size(), 80u);
  const auto panel = build_panel(series, cal);
  EXPECT_EQ(panel.rows(), 79u);
  EXPECT_EQ(panel.cols(), 3u);
}

TEST(Inputs, MissingManifestColumnIsNamed) {
  const auto msg = error_text([] { io::read_manifest(kFixtures / "bad_manifest.csv"); }, ErrorCode::ParseError);
  EXPECT_NE(msg.find("'industry'"), std::string::npos) << msg;
}

TEST(Inputs, Groups) {
  const auto groups = io::read_groups(kFixtures / "groups.json");
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].name, "greece");
  EXPECT_EQ(groups[0].remove_labels, (std::vector<std::string>{"GAMMA"}));
  ASSERT_EQ(groups[0].add_series.size(), 2u);
  EXPECT_EQ(groups[0].add_series[0].meta.country, "Greece");
}

TEST_F(Scratch, MatrixRoundTrip) {
  LabeledMatrix m({"A", "B,comma", "C*"}, MatrixKind::Ete);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = u(rng);
  io::write_matrix(dir_ / "ete.csv", m, {{"seed", 5}});
  const auto back = io::read_matrix(dir_ / "ete.csv");
  EXPECT_EQ(back.matrix.kind(), MatrixKind::Ete);
  EXPECT_EQ(back.matrix.labels(), m.labels());
  EXPECT_EQ(back.matrix.data(), m.data());
  EXPECT_EQ(back.params["seed"], 5);
  const auto side = io::read_json(dir_ / "ete.json");
  EXPECT_EQ(side["kind"], "ete");
  EXPECT_EQ(side["size"], 3);

  fs::remove(dir_ / "ete.json");
  error_text([&] { io::read_matrix(dir_ / "ete.csv"); }, ErrorCode::MissingArtifact);
  EXPECT_EQ(io::read_matrix(dir_ / "ete.csv", MatrixKind::Te).matrix.kind(), MatrixKind::Te);
}

TEST_F(Scratch, PanelRoundTrip) {
  const auto panel = augment_lagged(
      build_panel(io::read_manifest(kFixtures / "manifest.csv"), io::read_calendar(kFixtures / "calendar.csv")), 1);
  io::write_panel(dir_ / "panel.csv", panel);
  const auto back = io::read_panel(dir_ / "panel.csv");
  EXPECT_EQ(back.labels(), panel.labels());
  EXPECT_EQ(back.all_values(), panel.all_values());
  EXPECT_EQ(back.dates(), panel.dates());
  EXPECT_EQ(back.column(back.index_of("BETA*")).meta.sub_industry, "Machinery, Heavy");
  EXPECT_EQ(back.column(back.index_of("BETA*")).lag, 1u);
}

TEST_F(Scratch, CentralityRoundTripAndTopTable) {
  LabeledMatrix d({"A", "B", "C", "D"}, MatrixKind::Distance, 1.5);
  d(0, 1) = d(1, 0) = d(1, 2) = d(2, 1) = d(1, 3) = d(3, 1) = 0.5;
  const auto g = asset_graph(d, 1.0);
  const auto rep = centralities(g);
  io::NodeInfo info;
  for (const auto& l : d.labels()) info[l] = PanelColumn{l, l, {"US", "Tech", "Software"}, 0};
  io::write_centrality(dir_ / "c.csv", rep, info, 2);
  const auto back = io::read_centrality(dir_ / "c.csv");
  EXPECT_EQ(back.report.nodes, rep.nodes);
  EXPECT_EQ(back.report.measures, rep.measures);
  for (Measure m : rep.measures) EXPECT_EQ(back.report.at(m), rep.at(m)) << to_string(m);
  EXPECT_EQ(back.info.at("C").meta.industry, "Tech");

  const auto table = io::format_top_table("ND", rep.top(Measure::ND, 2), info);
  EXPECT_NE(table.find("B"), std::string::npos);
  EXPECT_NE(io::format_top_table("ND", {}, info).find("(no nodes)"), std::string::npos);
  const auto side = io::read_json(dir_ / "c.json");
  EXPECT_EQ(side["measures"]["ND"]["top"][0]["label"], "B");
  EXPECT_EQ(side["measures"]["ND"]["top"].size(), 4u);  // three leaves tie for second place
}

TEST(Dot, NodeAndEdgeAttributes) {
  LabeledMatrix e({"X", "Y*"}, MatrixKind::Ete);
  e(1, 0) = 0.7;
  const auto g = asset_graph(e, 0.5);
  io::NodeInfo info{{"X", PanelColumn{"X", "X", {"Greece", "Banks", "Regional"}, 0}}};
  const auto dot = io::to_dot(g, info, "ete_0.5");
  EXPECT_EQ(dot.rfind("digraph \"ete_0.5\" {", 0), 0u);
  EXPECT_NE(dot.find("\"X\" [country=\"Greece\", industry=\"Banks\", lag=0]"), std::string::npos);
  EXPECT_NE(dot.find("\"Y*\" [country=\"\", industry=\"\", lag=1]"), std::string::npos);
  EXPECT_NE(dot.find("\"Y*\" -> \"X\" [weight=\"0.7\"]"), std::string::npos);
  EXPECT_EQ(io::to_edge_list(g), "source,target,weight\nY*,X,0.7\n");
}

TEST_F(Scratch, EdgeListRoundTrip) {
  LabeledMatrix d({"A", "B", "C"}, MatrixKind::Distance, 1.5);
  d(0, 2) = d(2, 0) = 0.25;
  const auto g = asset_graph(d, 1.0);
  io::write_text(dir_ / "e.csv", io::to_edge_list(g));
  const auto back = io::read_edge_list(dir_ / "e.csv", false);
  EXPECT_EQ(back.nodes, g.nodes);
  ASSERT_EQ(back.edges.size(), 1u);
  EXPECT_EQ(back.edges[0].weight, 0.25);
}

TEST_F(Scratch, NoiseFloorReport) {
  const auto nf = correlation_noise_floor(50, 4, SurrogatePlan{5, 1});
  io::write_noise_floor(dir_ / "noise_floor.json", nf, {{"rows", 50}});
  const auto j = io::read_json(dir_ / "noise_floor.json");
  for (const char* key : {"min_distance_mean", "min_distance_std", "simulations", "params", "samples"})
    EXPECT_TRUE(j.contains(key)) << key;
  const auto back = io::read_noise_floor(dir_ / "noise_floor.json");
  EXPECT_EQ(back.samples, nf.samples);
  EXPECT_EQ(back.min_distance_mean, nf.min_distance_mean);
}

TEST(Config, JsonRoundTrip) {
  RunConfig c;
  c.manifest = "m.csv";
  c.bin_width = 0.05;
  c.bin_mode = BinMode::PerSeries;
  c.k = 2;
  c.thresholds = {0.1, 0.3};
  c.seed = 18446744073709551615ULL;
  EXPECT_EQ(config_from_json(to_json(c)), c);
  EXPECT_EQ(config_from_json(nlohmann::ordered_json::object()), RunConfig{});
  const auto msg = error_text([] { config_from_json({{"bogus", 1}}); }, ErrorCode::ParseError);
  EXPECT_NE(msg.find("bogus"), std::string::npos);
  error_text([] { config_from_json({{"k", "two"}}); }, ErrorCode::ParseError);
  RunConfig bad;
  bad.k = 5;
  error_text([&] { bad.validate(); }, ErrorCode::InvalidArgument);
}

TEST(Synth, GroundTruth) {
  const auto clean = synth_bsc(0.0, 100, 1);
  EXPECT_EQ(*clean.analytic_te_bits, 1.0);
  const auto noisy = synth_bsc(0.5, 100, 1);
  EXPECT_EQ(*noisy.analytic_te_bits, 0.0);
  ASSERT_EQ(clean.edges.size(), 1u);
  EXPECT_EQ(clean.edges[0].source, "Y");
  EXPECT_EQ(clean.edges[0].target, "X");
  for (std::size_t t = 1; t < 100; ++t) EXPECT_EQ(clean.returns[1][t], clean.returns[0][t - 1]);

  const auto none = synth_var1({{0.5, 0.0}, {0.0, 0.3}}, 100, 2, 0.01);
  EXPECT_TRUE(none.edges.empty());
  const auto one = synth_var1({{0.2, 0.0}, {0.6, 0.2}}, 100, 2, 0.01);
  ASSERT_EQ(one.edges.size(), 1u);
  EXPECT_EQ(one.edges[0].source, "V1");
  EXPECT_EQ(one.edges[0].target, "V2");

  const auto j = io::ground_truth_json(clean, {{"epsilon", 0.0}});
  EXPECT_EQ(j["kind"], "bsc");
  EXPECT_EQ(j["analytic_te_bits"], 1.0);
  EXPECT_TRUE(io::ground_truth_json(none, {})["analytic_te_bits"].is_null());
}

TEST(Synth, InvalidParams) {
  error_text([] { synth_bsc(0.7, 100, 1); }, ErrorCode::InvalidParams);
  error_text([] { synth_ar1(1.0, 2, 100, 1); }, ErrorCode::InvalidParams);
  error_text([] { synth_var1({{1.2, 0.0}, {0.0, 0.1}}, 100, 1, 0.01); }, ErrorCode::InvalidParams);
}

TEST_F(Scratch, SynthPricesIngestBackToReturns) {
  const auto p = synth_ar1(0.5, 2, 200, 4);
  TradingCalendar cal;
  const auto series = to_price_series(p, cal);
  io::write_manifest(dir_, series);
  io::write_calendar(dir_ / "calendar.csv", cal);
  const auto panel = build_panel(io::read_manifest(dir_ / "manifest.csv"), io::read_calendar(dir_ / "calendar.csv"));
  ASSERT_EQ(panel.rows(), 200u);
  for (std::size_t r = 0; r < 200; ++r) EXPECT_NEAR(panel.at(r, 0), p.returns[0][r], 1e-9);
}
