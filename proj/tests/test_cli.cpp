#include <cstdlib>
#include <map>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "teflow/teflow.hpp"

namespace fs = std::filesystem;
using namespace teflow;

namespace {

const fs::path kFixtures = fs::path(TEFLOW_FIXTURES);
const std::string kCli = TEFLOW_CLI;

struct CliResult {
  int code = -1;
  std::string output;
};

CliResult run(const std::string& args, const fs::path& log) {
  const std::string cmd = "\"" + kCli + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.output = io::read_text(log);
  return r;
}

std::string mini_inputs() {
  return "--manifest \"" + (kFixtures / "manifest.csv").string() + "\" --calendar \"" +
         (kFixtures / "calendar.csv").string() + "\"";
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = io::read_text(e.path());
  return files;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("teflow_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliResult cli(const std::string& args) { return run(args, dir_ / "log.txt"); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, PipelineWritesEveryArtifact) {
  const auto out = dir_ / "run";
  const auto r = cli("pipeline " + mini_inputs() + " --groups \"" + (kFixtures / "groups.json").string() +
                     "\" --surrogates 3 --noise-sims 20 --seed 4 --out \"" + out.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* m : {"correlation", "distance", "te", "rte", "ete", "nte", "nte_distance"}) {
    EXPECT_TRUE(fs::exists(out / "matrices" / (std::string(m) + ".csv"))) << m;
    EXPECT_TRUE(fs::exists(out / "matrices" / (std::string(m) + ".json"))) << m;
  }
  for (const char* f : {"run.json", "noise_floor.json", "panel.csv", "graphs/distance_1.2.dot",
                        "graphs/ete_0.05_edges.csv", "embeddings/distance.csv", "report/top_tables.txt",
                        "crisis/greece/greece_receivers.csv", "crisis/greece/greece_senders.csv"})
    EXPECT_TRUE(fs::exists(out / f)) << f;

  const auto manifest = io::read_json(out / "run.json");
  EXPECT_EQ(manifest["command"], "pipeline");
  EXPECT_EQ(manifest["config"]["seed"], 4);
  EXPECT_TRUE(manifest["seeds"].contains("rte"));
  for (const auto& f : manifest["files"]) EXPECT_TRUE(fs::exists(out / f["file"].get<std::string>())) << f;

  const auto te = io::read_matrix(out / "matrices" / "te.csv");
  EXPECT_EQ(te.matrix.kind(), MatrixKind::Te);
  EXPECT_EQ(te.params["k"], 1);
  const auto nf = io::read_json(out / "noise_floor.json");
  EXPECT_EQ(nf["simulations"], 20);

  const auto receivers = io::read_csv(out / "crisis" / "greece" / "greece_receivers.csv");
  EXPECT_EQ(receivers.header, (std::vector<std::string>{"label", "country", "industry", "sub_industry", "score"}));
  ASSERT_EQ(receivers.rows.size(), 2u);  // ALPHA and BETA remain outside the group
}

TEST_F(Cli, RerunIsByteIdentical) {
  const auto out = dir_ / "run";
  const std::string args = "pipeline " + mini_inputs() + " --surrogates 2 --noise-sims 10 --seed 11 --out \"" +
                           out.string() + "\"";
  ASSERT_EQ(cli(args + " --threads 1").code, 0);
  const auto first = snapshot(out);
  fs::remove_all(out);
  ASSERT_EQ(cli(args + " --threads 3").code, 0);
  auto second = snapshot(out);
  // run.json records the thread count; everything else must match byte for byte.
  auto strip_threads = [](std::string s) {
    const auto pos = s.find("\"threads\"");
    return pos == std::string::npos ? s : s.substr(0, pos) + s.substr(s.find('\n', pos));
  };
  ASSERT_EQ(first.size(), second.size());
  for (const auto& [name, text] : first) {
    if (name == "run.json")
      EXPECT_EQ(strip_threads(text), strip_threads(second[name]));
    else
      EXPECT_EQ(text, second[name]) << name;
  }
}

TEST_F(Cli, ConfigReplayMatches) {
  const auto out = dir_ / "a";
  ASSERT_EQ(cli("pipeline " + mini_inputs() + " --surrogates 2 --noise-sims 5 --seed 2 --bin-width 0.05 --out \"" +
                out.string() + "\"")
                .code,
            0);
  const auto replay = dir_ / "b";
  const auto r = cli("pipeline --config \"" + (out / "run.json").string() + "\" --out \"" + replay.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(io::read_text(out / "matrices" / "ete.csv"), io::read_text(replay / "matrices" / "ete.csv"));
  EXPECT_EQ(io::read_json(replay / "run.json")["config"]["bin_width"], 0.05);
}

TEST_F(Cli, BadManifestNamesMissingColumn) {
  const auto r = cli("pipeline --manifest \"" + (kFixtures / "bad_manifest.csv").string() + "\" --calendar \"" +
                     (kFixtures / "calendar.csv").string() + "\" --out \"" + (dir_ / "x").string() + "\"");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.output.find("'industry'"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("[ingest]"), std::string::npos) << r.output;
}

TEST_F(Cli, ReportWithoutPipelineOutput) {
  const auto r = cli("report --dir \"" + dir_.string() + "\"");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.output.find("MissingArtifact"), std::string::npos) << r.output;
}

TEST_F(Cli, ReportKeepsDrawsAndShortLists) {
  LabeledMatrix d({"A", "B", "C", "D"}, MatrixKind::Distance, 1.5);
  d(0, 1) = d(1, 0) = d(1, 2) = d(2, 1) = d(1, 3) = d(3, 1) = 0.5;
  const auto rep = centralities(asset_graph(d, 1.0));
  io::NodeInfo info;
  for (const auto& l : d.labels()) info[l] = PanelColumn{l, l, {"US", "Tech", "Software"}, 0};
  io::write_centrality(dir_ / "centrality" / "star.csv", rep, info);

  auto r = cli("report --dir \"" + dir_.string() + "\" --top 2");
  ASSERT_EQ(r.code, 0) << r.output;
  const auto csv = io::read_csv(dir_ / "report" / "top_tables.csv");
  std::size_t nd_rows = 0;
  for (const auto& row : csv.rows)
    if (row[1] == "ND") ++nd_rows;
  EXPECT_EQ(nd_rows, 4u);  // B, then the three tied leaves

  r = cli("report --dir \"" + dir_.string() + "\" --top 50");
  ASSERT_EQ(r.code, 0) << r.output;
  std::size_t bc_rows = 0;
  for (const auto& row : io::read_csv(dir_ / "report" / "top_tables.csv").rows)
    if (row[1] == "BC") ++bc_rows;
  EXPECT_EQ(bc_rows, 4u);
}

TEST_F(Cli, SynthThenStages) {
  const auto data = dir_ / "bsc";
  auto r = cli("synth --kind bsc --epsilon 0 --length 3000 --seed 5 --out \"" + data.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* f : {"manifest.csv", "calendar.csv", "ground_truth.json", "X.csv", "Y.csv"})
    EXPECT_TRUE(fs::exists(data / f)) << f;
  EXPECT_EQ(io::read_json(data / "ground_truth.json")["analytic_te_bits"], 1.0);

  const auto work = dir_ / "work";
  r = cli("panel --manifest \"" + (data / "manifest.csv").string() + "\" --calendar \"" +
          (data / "calendar.csv").string() + "\" --out \"" + work.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.output;
  r = cli("ete --panel \"" + (work / "panel.csv").string() + "\" --surrogates 2 --out \"" + work.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.output;
  const auto ete = io::read_matrix(work / "ete.csv").matrix;
  EXPECT_GT(ete(ete.index_of("Y"), ete.index_of("X")), 0.95);
  EXPECT_LT(ete(ete.index_of("X"), ete.index_of("Y")), 0.01);

  r = cli("graph --matrix \"" + (work / "ete.csv").string() + "\" --threshold 0.5 --out \"" + work.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(io::read_text(work / "graphs" / "ete_0.5_edges.csv").find("\nY,X,"), std::string::npos);

  r = cli("embed --matrix \"" + (work / "nte_distance.csv").string() + "\" --dims 1 --out \"" + work.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(fs::exists(work / "embeddings" / "nte_distance.csv"));
}

TEST_F(Cli, SynthRejectsBadParameters) {
  const auto r = cli("synth --kind bsc --epsilon 0.9 --out \"" + dir_.string() + "\"");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.output.find("InvalidParams"), std::string::npos) << r.output;
}

TEST_F(Cli, GaussianNoiseFloor) {
  const auto r = cli("noise-floor --rows 500 --cols 2 --noise-sims 4 --seed 1 --out \"" + dir_.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.output;
  const auto nf = io::read_noise_floor(dir_ / "noise_floor.json");
  EXPECT_EQ(nf.samples.size(), 4u);
  EXPECT_NEAR(nf.min_distance_mean, std::sqrt(2.0), 0.15);
}
