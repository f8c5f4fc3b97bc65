// teflow: command-line front end.
//
//   teflow pipeline --manifest m.csv --calendar c.csv --out run/ [--groups g.json]
//   teflow panel | te | ete | graph | centrality | embed | crisis | synth | noise-floor | report
//
// Every random draw derives from --seed; rerunning with the same flags gives
// byte-identical numeric files.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "teflow/teflow.hpp"

namespace {

namespace fs = std::filesystem;
using json = teflow::io::json;
using teflow::ErrorCode;
using teflow::LabeledMatrix;
using teflow::MatrixKind;
using teflow::RunConfig;

struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& msg) : std::runtime_error("[" + stage + "] " + msg) {}
};

template <typename F>
auto stage(const std::string& name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

// Named sub-streams of the master seed.
std::uint64_t stream_seed(std::uint64_t master, const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : name) h = (h ^ ch) * 1099511628211ULL;
  return teflow::derive_seed(master, h, 0);
}

std::string tag(double v) { return teflow::io::format_double(v); }

// Output files and the parameters that produced them, for run.json.
class Ledger {
 public:
  explicit Ledger(fs::path root) : root_(std::move(root)) {}

  fs::path path(const std::string& rel) const { return root_ / rel; }

  void record(const std::string& rel, json params) {
    files_.push_back({{"file", rel}, {"params", std::move(params)}});
  }
  void seed(const std::string& name, std::uint64_t value) { seeds_[name] = value; }
  void note(const std::string& text) { notes_.push_back(text); }

  json files() const { return files_; }
  json seeds() const { return seeds_; }
  json notes() const { return notes_; }

 private:
  fs::path root_;
  json files_ = json::array();
  json seeds_ = json::object();
  json notes_ = json::array();
};

json binning_json(const teflow::PanelSymbols& syms, const RunConfig& cfg) {
  json j = {{"width", cfg.bin_width}, {"mode", teflow::to_string(cfg.bin_mode)}, {"n_bins", syms.n_bins}};
  if (cfg.bin_mode == teflow::BinMode::Global && !syms.specs.empty()) {
    j["lo"] = syms.specs.front().lo();
    j["hi"] = syms.specs.front().hi();
  }
  return j;
}

teflow::Parallelism parallelism(const RunConfig& cfg) { return {cfg.threads}; }

// ------------------------------------------------------------------- stages

teflow::ReturnPanel load_base_panel(const RunConfig& cfg, std::vector<teflow::PriceSeries>& series,
                                    teflow::TradingCalendar& cal) {
  return stage("ingest", [&] {
    teflow::require(!cfg.manifest.empty(), ErrorCode::InvalidArgument, "--manifest is required");
    teflow::require(!cfg.calendar.empty(), ErrorCode::InvalidArgument, "--calendar is required");
    series = teflow::io::read_manifest(cfg.manifest);
    cal = teflow::io::read_calendar(cfg.calendar);
    return teflow::build_panel(series, cal);
  });
}

struct FlowMatrices {
  LabeledMatrix te, rte, ete, nte, nte_distance;
  json params;
};

// TE, RTE, ETE, NTE and NTE distance of a panel, written under `prefix`.
FlowMatrices flow_matrices(const teflow::ReturnPanel& panel, const RunConfig& cfg, Ledger& ledger,
                           const std::string& prefix, const std::string& panel_file, const std::string& seed_name) {
  const auto par = parallelism(cfg);
  const auto syms = stage("discretize", [&] { return teflow::discretize_panel(panel, cfg.bin_width, cfg.bin_mode); });
  FlowMatrices f;
  f.params = {{"source", panel_file}, {"binning", binning_json(syms, cfg)}, {"k", cfg.k}, {"l", cfg.l}};

  f.te = stage("te", [&] { return teflow::te_matrix(panel.labels(), syms.symbols, syms.n_bins, cfg.k, cfg.l, par); });
  teflow::io::write_matrix(ledger.path(prefix + "te.csv"), f.te, f.params);
  ledger.record(prefix + "te.csv", f.params);

  const teflow::SurrogatePlan plan{cfg.surrogates, stream_seed(cfg.seed, seed_name)};
  ledger.seed(seed_name, plan.master_seed);
  json rparams = f.params;
  rparams["surrogates"] = plan.n_sims;
  rparams["seed"] = cfg.seed;
  rparams["stream"] = seed_name;
  rparams["stream_seed"] = plan.master_seed;
  f.rte = stage("rte", [&] {
    return teflow::rte_matrix(panel.labels(), syms.symbols, syms.n_bins, cfg.k, cfg.l, plan, par);
  });
  teflow::io::write_matrix(ledger.path(prefix + "rte.csv"), f.rte, rparams);
  ledger.record(prefix + "rte.csv", rparams);

  f.ete = stage("ete", [&] { return teflow::ete_matrix(f.te, f.rte); });
  teflow::io::write_matrix(ledger.path(prefix + "ete.csv"), f.ete, rparams);
  ledger.record(prefix + "ete.csv", rparams);

  f.nte = stage("nte", [&] { return teflow::nte_matrix(f.ete, syms.symbols); });
  teflow::io::write_matrix(ledger.path(prefix + "nte.csv"), f.nte, rparams);
  ledger.record(prefix + "nte.csv", rparams);

  f.nte_distance = stage("nte-distance", [&] { return teflow::nte_distance(f.nte); });
  teflow::io::write_matrix(ledger.path(prefix + "nte_distance.csv"), f.nte_distance, rparams);
  ledger.record(prefix + "nte_distance.csv", rparams);
  f.params = rparams;
  return f;
}

// Centrality report of a graph; measures whose power iteration does not
// converge are dropped and noted.
void write_graph_centrality(const teflow::AssetGraph& g, const teflow::io::NodeInfo& info, const RunConfig& cfg,
                            Ledger& ledger, const std::string& rel, json params) {
  auto measures = teflow::default_graph_measures(g.directed);
  teflow::CentralityReport rep;
  if (g.node_count() == 0) {
    rep.measures = measures;
    for (auto m : measures) rep.values[m] = {};
    params["empty"] = true;
  } else {
    try {
      rep = teflow::centralities(g, measures, parallelism(cfg));
    } catch (const teflow::Error& e) {
      if (e.code() != ErrorCode::NonConvergence) throw;
      std::erase_if(measures, [](teflow::Measure m) {
        return m == teflow::Measure::EC || m == teflow::Measure::EC_in || m == teflow::Measure::EC_out;
      });
      rep = teflow::centralities(g, measures, parallelism(cfg));
      params["skipped"] = json::array({"EC", std::string(e.what())});
      ledger.note(rel + ": eigenvector centrality skipped (" + e.what() + ")");
    }
  }
  teflow::io::write_centrality(ledger.path(rel), rep, info, params, cfg.top);
  ledger.record(rel, params);
}

void write_graph(const teflow::AssetGraph& g, const teflow::io::NodeInfo& info, const RunConfig& cfg, Ledger& ledger,
                 const std::string& name, json params) {
  params["threshold"] = g.threshold;
  params["mode"] = teflow::to_string(g.mode);
  params["directed"] = g.directed;
  params["nodes"] = g.node_count();
  params["edges"] = g.edges.size();
  teflow::io::write_text(ledger.path("graphs/" + name + ".dot"), teflow::io::to_dot(g, info, name));
  ledger.record("graphs/" + name + ".dot", params);
  teflow::io::write_text(ledger.path("graphs/" + name + "_edges.csv"), teflow::io::to_edge_list(g));
  ledger.record("graphs/" + name + "_edges.csv", params);
  write_graph_centrality(g, info, cfg, ledger, "centrality/" + name + ".csv", params);
}

// Graphs at every applicable threshold, plus node strength on the matrix.
void graphs_and_centrality(const LabeledMatrix& m, const std::string& name, const teflow::io::NodeInfo& info,
                           const RunConfig& cfg, Ledger& ledger, const json& params) {
  stage("graph", [&] {
    if (m.kind() == MatrixKind::Distance) {
      write_graph(teflow::asset_graph(m, cfg.distance_threshold), info, cfg, ledger,
                  name + "_" + tag(cfg.distance_threshold), params);
    } else {
      for (double t : cfg.thresholds)
        write_graph(teflow::asset_graph(m, t), info, cfg, ledger, name + "_" + tag(t), params);
    }
  });
}

void strength(const LabeledMatrix& m, const std::string& name, const teflow::io::NodeInfo& info, const RunConfig& cfg,
              Ledger& ledger, json params) {
  stage("centrality", [&] {
    const auto rep = teflow::centralities(m);
    params["matrix"] = name;
    const std::string rel = "centrality/strength_" + name + ".csv";
    teflow::io::write_centrality(ledger.path(rel), rep, info, params, cfg.top);
    ledger.record(rel, params);
  });
}

void embedding(const LabeledMatrix& dist, const std::string& name, const teflow::io::NodeInfo& info,
               const RunConfig& cfg, Ledger& ledger, json params) {
  stage("embed", [&] {
    const std::string rel = "embeddings/" + name + ".csv";
    if (dist.size() < cfg.dims + 1) {
      ledger.note(rel + ": skipped, fewer than dims + 1 points");
      return;
    }
    const auto e = teflow::embed(dist, cfg.dims);
    params["dims"] = cfg.dims;
    params["matrix"] = name;
    teflow::io::write_embedding(ledger.path(rel), e, info, params);
    ledger.record(rel, params);
  });
}

void noise_floor(const teflow::ReturnPanel& panel, const LabeledMatrix& dist, const RunConfig& cfg, Ledger& ledger) {
  stage("noise-floor", [&] {
    const teflow::SurrogatePlan plan{cfg.noise_sims, stream_seed(cfg.seed, "noise-floor")};
    ledger.seed("noise-floor", plan.master_seed);
    const auto nf = teflow::correlation_noise_floor(panel.all_values(), plan, parallelism(cfg));
    double observed = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dist.size(); ++i)
      for (std::size_t j = i + 1; j < dist.size(); ++j) observed = std::min(observed, dist(i, j));
    json params = {{"generator", "permuted-panel"},
                   {"source", "panel.csv"},
                   {"rows", panel.rows()},
                   {"columns", panel.cols()},
                   {"simulations", plan.n_sims},
                   {"seed", cfg.seed},
                   {"stream_seed", plan.master_seed},
                   {"observed_min_distance", observed}};
    teflow::io::write_noise_floor(ledger.path("noise_floor.json"), nf, params);
    ledger.record("noise_floor.json", params);
  });
}

void crisis(const std::vector<teflow::PriceSeries>& series, const teflow::TradingCalendar& cal, const RunConfig& cfg,
            Ledger& ledger) {
  const auto groups = stage("crisis", [&] { return teflow::io::read_groups(cfg.groups); });
  for (const auto& g : groups) {
    stage("crisis:" + g.name, [&] {
      const std::string dir = "crisis/" + g.name + "/";
      const auto panel = teflow::build_group_panel(series, g, cal, cfg.max_lag);
      teflow::io::write_panel(ledger.path(dir + "panel.csv"), panel);
      ledger.record(dir + "panel.csv", {{"group", g.name}, {"max_lag", cfg.max_lag}});
      const auto f = flow_matrices(panel, cfg, ledger, dir, dir + "panel.csv", "crisis/" + g.name);
      const auto rep = teflow::flow_report(f.ete, g, cfg.top);
      json params = f.params;
      params["group"] = g.name;
      params["top"] = cfg.top;
      teflow::io::write_flow_report(ledger.path(dir), rep, teflow::io::node_info(panel), params);
      for (const char* suffix : {"_receivers.csv", "_senders.csv", "_flows.json"}) ledger.record(dir + g.name + suffix, params);
    });
  }
}

// ------------------------------------------------------------------- report

std::string build_report(const fs::path& dir, std::size_t top, std::string& csv) {
  const fs::path cdir = dir / "centrality";
  teflow::require(fs::is_directory(cdir), ErrorCode::MissingArtifact,
                  "no centrality reports under '" + dir.string() + "'; run the pipeline first");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(cdir))
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  teflow::require(!files.empty(), ErrorCode::MissingArtifact, "'" + cdir.string() + "' holds no reports");
  std::sort(files.begin(), files.end());

  std::ostringstream text;
  csv = "source,measure,rank,label,country,industry,sub_industry,score\n";
  for (const auto& f : files) {
    const auto file = teflow::io::read_centrality(f);
    const std::string source = f.stem().string();
    text << "== " << source << " (" << file.report.nodes.size() << " nodes)\n";
    for (auto m : file.report.measures) {
      const auto rows = file.report.nodes.empty() ? std::vector<teflow::RankedEntry>{} : file.report.top(m, top);
      text << teflow::io::format_top_table(teflow::to_string(m), rows, file.info);
      std::istringstream lines(teflow::io::top_table_csv(teflow::to_string(m), rows, file.info));
      for (std::string line; std::getline(lines, line);) csv += teflow::io::csv_field(source) + ',' + line + '\n';
    }
    text << '\n';
  }
  return text.str();
}

void write_run_manifest(const RunConfig& cfg, const Ledger& ledger, const std::string& command) {
  json run = {{"command", command},
              {"config", teflow::to_json(cfg)},
              {"seeds", ledger.seeds()},
              {"files", ledger.files()},
              {"notes", ledger.notes()}};
  teflow::io::write_json(ledger.path("run.json"), run);
}

// -------------------------------------------------------------------- main

void run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  Ledger ledger(cfg.out);
  ledger.seed("master", cfg.seed);
  std::vector<teflow::PriceSeries> series;
  teflow::TradingCalendar cal;
  const auto panel = load_base_panel(cfg, series, cal);
  teflow::io::write_panel(ledger.path("panel.csv"), panel);
  ledger.record("panel.csv", {{"manifest", cfg.manifest}, {"calendar", cfg.calendar}});
  const auto info = teflow::io::node_info(panel);

  const auto corr = stage("correlation", [&] { return teflow::pearson_matrix(panel, parallelism(cfg)); });
  const auto dist = stage("correlation", [&] { return teflow::correlation_distance(corr); });
  const json cparams = {{"source", "panel.csv"}};
  teflow::io::write_matrix(ledger.path("matrices/correlation.csv"), corr, cparams);
  ledger.record("matrices/correlation.csv", cparams);
  teflow::io::write_matrix(ledger.path("matrices/distance.csv"), dist, cparams);
  ledger.record("matrices/distance.csv", cparams);

  const auto f = flow_matrices(panel, cfg, ledger, "matrices/", "panel.csv", "rte");

  graphs_and_centrality(dist, "distance", info, cfg, ledger, cparams);
  graphs_and_centrality(f.ete, "ete", info, cfg, ledger, f.params);
  strength(corr, "correlation", info, cfg, ledger, cparams);
  strength(f.ete, "ete", info, cfg, ledger, f.params);

  embedding(dist, "distance", info, cfg, ledger, cparams);
  embedding(f.nte_distance, "nte_distance", info, cfg, ledger, f.params);

  noise_floor(panel, dist, cfg, ledger);
  if (!cfg.groups.empty()) crisis(series, cal, cfg, ledger);

  stage("report", [&] {
    std::string csv;
    const auto text = build_report(cfg.out, cfg.top, csv);
    teflow::io::write_text(ledger.path("report/top_tables.txt"), text);
    teflow::io::write_text(ledger.path("report/top_tables.csv"), csv);
    ledger.record("report/top_tables.csv", {{"top", cfg.top}});
  });
  write_run_manifest(cfg, ledger, "pipeline");
  std::cout << "wrote " << ledger.files().size() << " files to " << cfg.out << "\n";
}

std::vector<std::vector<double>> parse_coupling(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  for (std::string row; std::getline(ss, row, ';');) {
    std::vector<double> r;
    for (const auto& cell : teflow::io::split_csv_line(row)) r.push_back(teflow::io::parse_double(cell, "--coupling"));
    rows.push_back(std::move(r));
  }
  return rows;
}

struct SynthArgs {
  std::string kind = "bsc";
  double epsilon = 0.1;
  double phi = 0.5;
  std::size_t n_series = 2;
  std::string coupling = "0,0.5;0,0";
  std::size_t length = 1000;
  double sigma = 0.01;
};

void run_synth(const SynthArgs& a, const RunConfig& cfg) {
  teflow::SynthPanel p;
  json params = {{"length", a.length}, {"seed", cfg.seed}};
  if (a.kind == "bsc") {
    p = teflow::synth_bsc(a.epsilon, a.length, cfg.seed);
    params["epsilon"] = a.epsilon;
  } else if (a.kind == "ar1") {
    p = teflow::synth_ar1(a.phi, a.n_series, a.length, cfg.seed, a.sigma);
    params["phi"] = a.phi;
    params["series"] = a.n_series;
    params["sigma"] = a.sigma;
  } else if (a.kind == "var1") {
    const auto coupling = parse_coupling(a.coupling);
    p = teflow::synth_var1(coupling, a.length, cfg.seed, a.sigma);
    params["coupling"] = coupling;
    params["sigma"] = a.sigma;
  } else {
    teflow::fail(ErrorCode::InvalidParams, "unknown synth kind '" + a.kind + "' (bsc, ar1, var1)");
  }
  teflow::TradingCalendar cal;
  const auto series = teflow::to_price_series(p, cal);
  const fs::path out(cfg.out);
  teflow::io::write_manifest(out, series);
  teflow::io::write_calendar(out / "calendar.csv", cal);
  teflow::io::write_json(out / "ground_truth.json", teflow::io::ground_truth_json(p, params));
  std::cout << "wrote " << series.size() << " series to " << cfg.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer-entropy and correlation networks of asset returns"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string config_file;
  std::string panel_file;
  std::string matrix_file;
  std::string report_dir;
  std::size_t gaussian_rows = 0;
  std::size_t gaussian_cols = 0;
  std::size_t panel_lag = 0;
  SynthArgs synth;

  auto common_out = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output directory")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
  };
  auto inputs = [&](CLI::App* sub) {
    sub->add_option("--manifest", cfg.manifest, "Manifest CSV: ticker,file,country,industry,sub_industry");
    sub->add_option("--calendar", cfg.calendar, "Calendar CSV of trading dates");
  };
  auto binning = [&](CLI::App* sub) {
    sub->add_option("--bin-width", cfg.bin_width, "Bin width for symbolization")->capture_default_str();
    sub->add_option_function<std::string>(
           "--bin-mode", [&](const std::string& s) { cfg.bin_mode = teflow::parse_bin_mode(s); },
           "global or per-series (default global)")
        ->check(CLI::IsMember({"global", "per-series"}));
    sub->add_option("--k", cfg.k, "Destination history length")->capture_default_str();
    sub->add_option("--l", cfg.l, "Source history length")->capture_default_str();
  };
  auto surrogates = [&](CLI::App* sub) {
    sub->add_option("--surrogates", cfg.surrogates, "Shuffle surrogates for RTE")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  };
  auto thresholds = [&](CLI::App* sub) {
    sub->add_option("--threshold", cfg.thresholds, "ETE/TE graph threshold (repeatable)")->capture_default_str();
    sub->add_option("--distance-threshold", cfg.distance_threshold, "Correlation-distance graph threshold")
        ->capture_default_str();
    sub->add_option("--top", cfg.top, "Rows per top-K table (draws extend it)")->capture_default_str();
  };

  auto* pipeline = app.add_subcommand("pipeline", "Run every stage end to end");
  inputs(pipeline);
  binning(pipeline);
  surrogates(pipeline);
  thresholds(pipeline);
  common_out(pipeline);
  pipeline->add_option("--noise-sims", cfg.noise_sims, "Noise-floor simulations")->capture_default_str();
  pipeline->add_option("--groups", cfg.groups, "Crisis groups JSON");
  pipeline->add_option("--max-lag", cfg.max_lag, "Lag depth of crisis panels")->capture_default_str();
  pipeline->add_option("--dims", cfg.dims, "Embedding dimension")->capture_default_str();
  pipeline->add_option("--config", config_file, "Load settings from a run.json or config JSON; flags override");

  auto* panel_cmd = app.add_subcommand("panel", "Build the aligned log-return panel");
  inputs(panel_cmd);
  common_out(panel_cmd);
  panel_cmd->add_option("--max-lag", panel_lag, "Append lagged copies up to this depth (0 = none)")
      ->capture_default_str();

  auto* te_cmd = app.add_subcommand("te", "Transfer-entropy matrix of a panel");
  te_cmd->add_option("--panel", panel_file, "Panel CSV")->required();
  binning(te_cmd);
  common_out(te_cmd);

  auto* ete_cmd = app.add_subcommand("ete", "TE, RTE, ETE, NTE and NTE distance of a panel");
  ete_cmd->add_option("--panel", panel_file, "Panel CSV")->required();
  binning(ete_cmd);
  surrogates(ete_cmd);
  common_out(ete_cmd);

  auto* graph_cmd = app.add_subcommand("graph", "Threshold a matrix into asset graphs (DOT + edge list)");
  graph_cmd->add_option("--matrix", matrix_file, "Matrix CSV with sidecar")->required();
  thresholds(graph_cmd);
  common_out(graph_cmd);
  graph_cmd->add_option("--panel", panel_file, "Panel CSV for node metadata");

  auto* cent_cmd = app.add_subcommand("centrality", "Centrality reports of a matrix and its graphs");
  cent_cmd->add_option("--matrix", matrix_file, "Matrix CSV with sidecar")->required();
  thresholds(cent_cmd);
  common_out(cent_cmd);
  cent_cmd->add_option("--panel", panel_file, "Panel CSV for node metadata");

  auto* embed_cmd = app.add_subcommand("embed", "MDS coordinates of a distance matrix");
  embed_cmd->add_option("--matrix", matrix_file, "Distance matrix CSV")->required();
  embed_cmd->add_option("--dims", cfg.dims, "Embedding dimension")->capture_default_str();
  common_out(embed_cmd);
  embed_cmd->add_option("--panel", panel_file, "Panel CSV for node metadata");

  auto* crisis_cmd = app.add_subcommand("crisis", "Group flow rankings");
  inputs(crisis_cmd);
  crisis_cmd->add_option("--groups", cfg.groups, "Crisis groups JSON")->required();
  crisis_cmd->add_option("--max-lag", cfg.max_lag, "Lag depth")->capture_default_str();
  crisis_cmd->add_option("--top", cfg.top, "Rows per ranking")->capture_default_str();
  binning(crisis_cmd);
  surrogates(crisis_cmd);
  common_out(crisis_cmd);

  auto* synth_cmd = app.add_subcommand("synth", "Synthetic price series with planted couplings");
  synth_cmd->add_option("--kind", synth.kind, "bsc, ar1 or var1")->capture_default_str();
  synth_cmd->add_option("--epsilon", synth.epsilon, "bsc flip probability")->capture_default_str();
  synth_cmd->add_option("--phi", synth.phi, "ar1 coefficient")->capture_default_str();
  synth_cmd->add_option("--series", synth.n_series, "ar1 series count")->capture_default_str();
  synth_cmd->add_option("--coupling", synth.coupling, "var1 matrix, rows split by ';'")->capture_default_str();
  synth_cmd->add_option("--sigma", synth.sigma, "Innovation scale (ar1, var1)")->capture_default_str();
  synth_cmd->add_option("--length", synth.length, "Number of returns")->capture_default_str();
  synth_cmd->add_option("--seed", cfg.seed, "Seed")->capture_default_str();
  synth_cmd->add_option("--out", cfg.out, "Output directory")->capture_default_str();

  auto* noise_cmd = app.add_subcommand("noise-floor", "Minimum correlation distance of shuffled or Gaussian panels");
  noise_cmd->add_option("--panel", panel_file, "Panel CSV to permute");
  noise_cmd->add_option("--rows", gaussian_rows, "Gaussian panel rows (instead of --panel)");
  noise_cmd->add_option("--cols", gaussian_cols, "Gaussian panel columns");
  noise_cmd->add_option("--noise-sims", cfg.noise_sims, "Simulations")->capture_default_str();
  noise_cmd->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  common_out(noise_cmd);

  auto* report_cmd = app.add_subcommand("report", "Top-K centrality tables from pipeline output");
  report_cmd->add_option("--dir", report_dir, "Pipeline output directory")->required();
  report_cmd->add_option("--top", cfg.top, "Rows per table (draws extend it)")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (pipeline->parsed()) {
      if (!config_file.empty()) {
        auto j = teflow::io::read_json(config_file);
        RunConfig merged = teflow::config_from_json(j.contains("config") ? j["config"] : j);
        const std::vector<std::pair<const char*, std::function<void()>>> overrides{
            {"--manifest", [&] { merged.manifest = cfg.manifest; }},
            {"--calendar", [&] { merged.calendar = cfg.calendar; }},
            {"--groups", [&] { merged.groups = cfg.groups; }},
            {"--out", [&] { merged.out = cfg.out; }},
            {"--bin-width", [&] { merged.bin_width = cfg.bin_width; }},
            {"--bin-mode", [&] { merged.bin_mode = cfg.bin_mode; }},
            {"--k", [&] { merged.k = cfg.k; }},
            {"--l", [&] { merged.l = cfg.l; }},
            {"--surrogates", [&] { merged.surrogates = cfg.surrogates; }},
            {"--noise-sims", [&] { merged.noise_sims = cfg.noise_sims; }},
            {"--seed", [&] { merged.seed = cfg.seed; }},
            {"--threshold", [&] { merged.thresholds = cfg.thresholds; }},
            {"--distance-threshold", [&] { merged.distance_threshold = cfg.distance_threshold; }},
            {"--top", [&] { merged.top = cfg.top; }},
            {"--max-lag", [&] { merged.max_lag = cfg.max_lag; }},
            {"--dims", [&] { merged.dims = cfg.dims; }},
            {"--threads", [&] { merged.threads = cfg.threads; }},
        };
        for (const auto& [flag, apply] : overrides)
          if (pipeline->count(flag) > 0) apply();
        cfg = merged;
      }
      run_pipeline(cfg);
    } else if (panel_cmd->parsed()) {
      std::vector<teflow::PriceSeries> series;
      teflow::TradingCalendar cal;
      auto panel = load_base_panel(cfg, series, cal);
      if (panel_lag > 0) panel = stage("panel", [&] { return teflow::augment_lagged(panel, panel_lag); });
      teflow::io::write_panel(fs::path(cfg.out) / "panel.csv", panel);
      std::cout << "panel " << panel.rows() << " x " << panel.cols() << "\n";
    } else if (te_cmd->parsed()) {
      cfg.validate();
      const auto panel = stage("ingest", [&] { return teflow::io::read_panel(panel_file); });
      const auto syms = stage("discretize", [&] { return teflow::discretize_panel(panel, cfg.bin_width, cfg.bin_mode); });
      const auto te = stage("te", [&] {
        return teflow::te_matrix(panel.labels(), syms.symbols, syms.n_bins, cfg.k, cfg.l, parallelism(cfg));
      });
      teflow::io::write_matrix(fs::path(cfg.out) / "te.csv", te,
                               {{"source", panel_file}, {"binning", binning_json(syms, cfg)}, {"k", cfg.k}, {"l", cfg.l}});
    } else if (ete_cmd->parsed()) {
      cfg.validate();
      const auto panel = stage("ingest", [&] { return teflow::io::read_panel(panel_file); });
      Ledger ledger(cfg.out);
      flow_matrices(panel, cfg, ledger, "", panel_file, "rte");
      write_run_manifest(cfg, ledger, "ete");
    } else if (graph_cmd->parsed() || cent_cmd->parsed()) {
      cfg.validate();
      const auto m = stage("ingest", [&] { return teflow::io::read_matrix(matrix_file); });
      teflow::io::NodeInfo info;
      if (!panel_file.empty()) info = teflow::io::node_info(teflow::io::read_panel(panel_file));
      Ledger ledger(cfg.out);
      const std::string name = fs::path(matrix_file).stem().string();
      graphs_and_centrality(m.matrix, name, info, cfg, ledger, m.params);
      if (cent_cmd->parsed() && m.matrix.kind() != MatrixKind::Distance) strength(m.matrix, name, info, cfg, ledger, m.params);
      write_run_manifest(cfg, ledger, graph_cmd->parsed() ? "graph" : "centrality");
    } else if (embed_cmd->parsed()) {
      cfg.validate();
      const auto m = stage("ingest", [&] { return teflow::io::read_matrix(matrix_file); });
      teflow::io::NodeInfo info;
      if (!panel_file.empty()) info = teflow::io::node_info(teflow::io::read_panel(panel_file));
      Ledger ledger(cfg.out);
      embedding(m.matrix, fs::path(matrix_file).stem().string(), info, cfg, ledger, m.params);
      write_run_manifest(cfg, ledger, "embed");
    } else if (crisis_cmd->parsed()) {
      cfg.validate();
      std::vector<teflow::PriceSeries> series;
      teflow::TradingCalendar cal;
      load_base_panel(cfg, series, cal);
      Ledger ledger(cfg.out);
      crisis(series, cal, cfg, ledger);
      write_run_manifest(cfg, ledger, "crisis");
    } else if (synth_cmd->parsed()) {
      stage("synth", [&] { run_synth(synth, cfg); });
    } else if (noise_cmd->parsed()) {
      stage("noise-floor", [&] {
        const teflow::SurrogatePlan plan{cfg.noise_sims, stream_seed(cfg.seed, "noise-floor")};
        json params = {{"simulations", plan.n_sims}, {"seed", cfg.seed}, {"stream_seed", plan.master_seed}};
        teflow::NoiseFloor nf;
        if (!panel_file.empty()) {
          const auto panel = teflow::io::read_panel(panel_file);
          nf = teflow::correlation_noise_floor(panel.all_values(), plan, parallelism(cfg));
          params["generator"] = "permuted-panel";
          params["source"] = panel_file;
          params["rows"] = panel.rows();
          params["columns"] = panel.cols();
        } else {
          teflow::require(gaussian_rows > 0 && gaussian_cols > 0, ErrorCode::InvalidArgument,
                          "give --panel, or --rows and --cols for a Gaussian panel");
          nf = teflow::correlation_noise_floor(gaussian_rows, gaussian_cols, plan, parallelism(cfg));
          params["generator"] = "gaussian";
          params["rows"] = gaussian_rows;
          params["columns"] = gaussian_cols;
        }
        teflow::io::write_noise_floor(fs::path(cfg.out) / "noise_floor.json", nf, params);
        std::printf("min distance %.6f +- %.6f over %zu simulations\n", nf.min_distance_mean, nf.min_distance_std,
                    nf.samples.size());
      });
    } else if (report_cmd->parsed()) {
      stage("report", [&] {
        std::string csv;
        std::cout << build_report(report_dir, cfg.top, csv);
        teflow::io::write_text(fs::path(report_dir) / "report" / "top_tables.csv", csv);
      });
    }
  } catch (const std::exception& e) {
    std::cerr << "teflow: error " << e.what() << "\n";
    return 1;
  }
  return 0;
}
