#pragma once

// File formats: price and manifest CSVs in, panels / matrices / graphs /
// reports out. Doubles are written in shortest round-trip form so that equal
// values always produce equal bytes.

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "teflow/centrality.hpp"
#include "teflow/embed.hpp"
#include "teflow/error.hpp"
#include "teflow/flows.hpp"
#include "teflow/graph.hpp"
#include "teflow/labeled_matrix.hpp"
#include "teflow/panel.hpp"
#include "teflow/surrogate.hpp"
#include "teflow/synth.hpp"

namespace teflow::io {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- primitives

inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) fail(ErrorCode::IoError, "cannot format number");
  return std::string(buf, end);
}

inline double parse_double(const std::string& text, const std::string& context) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && (text[b] == ' ' || text[b] == '\t')) ++b;
  while (e > b && (text[e - 1] == ' ' || text[e - 1] == '\t' || text[e - 1] == '\r')) --e;
  if (b < e && text[b] == '+') ++b;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data() + b, text.data() + e, v);
  if (b == e || ec != std::errc{} || ptr != text.data() + e)
    fail(ErrorCode::ParseError, context + ": not a number: '" + text + "'");
  return v;
}

/// Splits one CSV record. Double-quoted fields may contain commas and "" for
/// a literal quote. A trailing CR is dropped.
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + '\n';
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a named column; ParseError naming the column when absent.
  std::size_t column(const std::string& name, const std::string& what) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    fail(ErrorCode::ParseError, what + " is missing column '" + name + "'");
  }
};

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

/// Reads a CSV whose first non-empty line is the header. Rows must have as
/// many fields as the header.
inline CsvTable read_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  CsvTable t;
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    require(fields.size() == t.header.size(), ErrorCode::ParseError,
            path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(t.header.size()) +
                " fields, got " + std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
  }
  require(have_header, ErrorCode::ParseError, "'" + path.string() + "' is empty");
  return t;
}

inline json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, "'" + path.string() + "': " + e.what());
  }
}

inline void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline fs::path sidecar_path(const fs::path& csv) {
  fs::path p = csv;
  return p.replace_extension(".json");
}

// ------------------------------------------------------------------- inputs

/// Per-ticker price file with columns date and close (extra columns ignored).
inline PriceSeries read_price_csv(const fs::path& path, const std::string& ticker, const AssetMeta& meta = {}) {
  const auto t = read_csv(path);
  const std::string what = "price file '" + path.string() + "'";
  const std::size_t dc = t.column("date", what);
  const std::size_t cc = t.column("close", what);
  PriceSeries s{ticker, meta, {}, {}};
  for (const auto& row : t.rows) {
    s.dates.push_back(Date::parse(row[dc]));
    s.closes.push_back(parse_double(row[cc], what + " on " + row[dc]));
  }
  s.validate();
  return s;
}

struct ManifestEntry {
  std::string ticker;
  fs::path file;
  AssetMeta meta;
};

inline std::vector<ManifestEntry> read_manifest_entries(const fs::path& path) {
  const auto t = read_csv(path);
  const std::string what = "manifest '" + path.string() + "'";
  const std::size_t tc = t.column("ticker", what);
  const std::size_t fc = t.column("file", what);
  const std::size_t cc = t.column("country", what);
  const std::size_t ic = t.column("industry", what);
  const std::size_t sc = t.column("sub_industry", what);
  std::vector<ManifestEntry> out;
  for (const auto& row : t.rows) {
    fs::path file = row[fc];
    if (file.is_relative()) file = path.parent_path() / file;
    out.push_back({row[tc], file, {row[cc], row[ic], row[sc]}});
  }
  return out;
}

/// All series named by a manifest; relative file paths resolve against the
/// manifest's directory.
inline std::vector<PriceSeries> read_manifest(const fs::path& path) {
  std::vector<PriceSeries> out;
  for (const auto& e : read_manifest_entries(path)) {
    try {
      out.push_back(read_price_csv(e.file, e.ticker, e.meta));
    } catch (const Error& err) {
      throw Error(err.code(), "ticker '" + e.ticker + "': " + err.what());
    }
  }
  return out;
}

/// One date per line in the first column; a header line is optional.
inline TradingCalendar read_calendar(const fs::path& path) {
  std::istringstream in(read_text(path));
  TradingCalendar cal;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const std::string cell = split_csv_line(line).front();
    if (first) {
      first = false;
      if (cell == "date") continue;
    }
    cal.dates.push_back(Date::parse(cell));
  }
  cal.validate();
  return cal;
}

inline void write_calendar(const fs::path& path, const TradingCalendar& cal) {
  std::string out = "date\n";
  for (const auto& d : cal.dates) out += d.str() + '\n';
  write_text(path, out);
}

inline void write_price_csv(const fs::path& path, const PriceSeries& s) {
  std::string out = "date,close\n";
  for (std::size_t i = 0; i < s.dates.size(); ++i) out += s.dates[i].str() + ',' + format_double(s.closes[i]) + '\n';
  write_text(path, out);
}

/// Writes one price file per series into `dir` plus manifest.csv pointing at
/// them.
inline void write_manifest(const fs::path& dir, const std::vector<PriceSeries>& series) {
  std::string manifest = "ticker,file,country,industry,sub_industry\n";
  for (const auto& s : series) {
    const std::string file = s.ticker + ".csv";
    write_price_csv(dir / file, s);
    manifest += csv_row({s.ticker, file, s.meta.country, s.meta.industry, s.meta.sub_industry});
  }
  write_text(dir / "manifest.csv", manifest);
}

/// Groups file: {"groups": [{"name": ..., "remove": [...], "add_manifest": ...}]}.
/// add_manifest resolves against the groups file's directory.
inline std::vector<GroupSpec> read_groups(const fs::path& path) {
  const json j = read_json(path);
  require(j.contains("groups") && j["groups"].is_array(), ErrorCode::ParseError,
          "'" + path.string() + "' has no 'groups' array");
  std::vector<GroupSpec> out;
  for (const auto& g : j["groups"]) {
    GroupSpec spec;
    require(g.contains("name") && g["name"].is_string(), ErrorCode::ParseError, "group without a name");
    spec.name = g["name"].get<std::string>();
    if (g.contains("remove"))
      for (const auto& r : g["remove"]) spec.remove_labels.push_back(r.get<std::string>());
    require(g.contains("add_manifest"), ErrorCode::ParseError, "group '" + spec.name + "' has no add_manifest");
    fs::path m = g["add_manifest"].get<std::string>();
    if (m.is_relative()) m = path.parent_path() / m;
    spec.add_series = read_manifest(m);
    require(!spec.add_series.empty(), ErrorCode::InvalidArgument, "group '" + spec.name + "' adds no series");
    out.push_back(std::move(spec));
  }
  return out;
}

// ------------------------------------------------------------------ metadata

using NodeInfo = std::map<std::string, PanelColumn>;

inline NodeInfo node_info(const ReturnPanel& panel) {
  NodeInfo info;
  for (const auto& c : panel.columns()) info[c.label] = c;
  return info;
}

namespace detail {

inline PanelColumn lookup(const NodeInfo& info, const std::string& label) {
  auto it = info.find(label);
  if (it != info.end()) return it->second;
  PanelColumn c;
  c.label = label;
  c.ticker = label;
  while (!c.ticker.empty() && c.ticker.back() == '*') {
    c.ticker.pop_back();
    ++c.lag;
  }
  return c;
}

inline json column_json(const PanelColumn& c) {
  return {{"label", c.label},
          {"ticker", c.ticker},
          {"country", c.meta.country},
          {"industry", c.meta.industry},
          {"sub_industry", c.meta.sub_industry},
          {"lag", c.lag}};
}

}  // namespace detail

// -------------------------------------------------------------------- panel

/// CSV with a date column then one column per label, plus a JSON sidecar of
/// column metadata next to it.
inline void write_panel(const fs::path& csv, const ReturnPanel& panel) {
  std::vector<std::string> header{"date"};
  for (const auto& c : panel.columns()) header.push_back(c.label);
  std::string out = csv_row(header);
  for (std::size_t r = 0; r < panel.rows(); ++r) {
    out += panel.dates()[r].str();
    for (std::size_t c = 0; c < panel.cols(); ++c) out += ',' + format_double(panel.at(r, c));
    out += '\n';
  }
  write_text(csv, out);

  json cols = json::array();
  for (const auto& c : panel.columns()) cols.push_back(detail::column_json(c));
  write_json(sidecar_path(csv), {{"rows", panel.rows()}, {"columns", cols}});
}

inline ReturnPanel read_panel(const fs::path& csv) {
  const auto t = read_csv(csv);
  require(!t.header.empty() && t.header[0] == "date", ErrorCode::ParseError,
          "panel '" + csv.string() + "' must start with a date column");
  NodeInfo info;
  if (fs::exists(sidecar_path(csv))) {
    const json j = read_json(sidecar_path(csv));
    for (const auto& c : j.at("columns")) {
      PanelColumn col;
      col.label = c.at("label").get<std::string>();
      col.ticker = c.at("ticker").get<std::string>();
      col.meta = {c.at("country").get<std::string>(), c.at("industry").get<std::string>(),
                  c.at("sub_industry").get<std::string>()};
      col.lag = c.at("lag").get<std::size_t>();
      info[col.label] = col;
    }
  }
  std::vector<PanelColumn> columns;
  for (std::size_t c = 1; c < t.header.size(); ++c) columns.push_back(detail::lookup(info, t.header[c]));
  std::vector<Date> dates;
  std::vector<std::vector<double>> values(columns.size());
  for (const auto& row : t.rows) {
    dates.push_back(Date::parse(row[0]));
    for (std::size_t c = 0; c < columns.size(); ++c)
      values[c].push_back(parse_double(row[c + 1], "panel column '" + columns[c].label + "'"));
  }
  return ReturnPanel(std::move(dates), std::move(columns), std::move(values));
}

// ------------------------------------------------------------------ matrices

/// CSV with a header row and a first column of labels; sidecar JSON holds
/// kind, labels and the caller's `params` (binning, k, l, seeds, sources).
inline void write_matrix(const fs::path& csv, const LabeledMatrix& m, const json& params = json::object()) {
  std::vector<std::string> header{"label"};
  for (const auto& l : m.labels()) header.push_back(l);
  std::string out = csv_row(header);
  for (std::size_t r = 0; r < m.size(); ++r) {
    out += csv_field(m.labels()[r]);
    for (std::size_t c = 0; c < m.size(); ++c) out += ',' + format_double(m(r, c));
    out += '\n';
  }
  write_text(csv, out);
  write_json(sidecar_path(csv), {{"kind", to_string(m.kind())}, {"size", m.size()}, {"params", params}});
}

struct MatrixFile {
  LabeledMatrix matrix;
  json params = json::object();
};

/// Reads a matrix CSV. The kind comes from the sidecar when present,
/// otherwise from `fallback`.
inline MatrixFile read_matrix(const fs::path& csv, std::optional<MatrixKind> fallback = std::nullopt) {
  const auto t = read_csv(csv);
  const std::string what = "matrix '" + csv.string() + "'";
  require(t.header.size() >= 2, ErrorCode::ParseError, what + " has no labels");
  std::vector<std::string> labels(t.header.begin() + 1, t.header.end());
  require(t.rows.size() == labels.size(), ErrorCode::ShapeMismatch, what + " is not square");

  MatrixFile out;
  std::optional<MatrixKind> kind = fallback;
  if (fs::exists(sidecar_path(csv))) {
    const json j = read_json(sidecar_path(csv));
    kind = parse_matrix_kind(j.at("kind").get<std::string>());
    if (j.contains("params")) out.params = j["params"];
  }
  require(kind.has_value(), ErrorCode::MissingArtifact, what + " has no sidecar naming its kind");
  out.matrix = LabeledMatrix(labels, *kind);
  for (std::size_t r = 0; r < labels.size(); ++r) {
    require(t.rows[r][0] == labels[r], ErrorCode::LabelMismatch,
            what + ": row " + std::to_string(r) + " is '" + t.rows[r][0] + "', expected '" + labels[r] + "'");
    for (std::size_t c = 0; c < labels.size(); ++c)
      out.matrix(r, c) = parse_double(t.rows[r][c + 1], what + " (" + labels[r] + ", " + labels[c] + ")");
  }
  return out;
}

// -------------------------------------------------------------------- graphs

inline std::string dot_quote(const std::string& s) {
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') q += '\\';
    q += ch;
  }
  return q + "\"";
}

inline std::string to_dot(const AssetGraph& g, const NodeInfo& info, const std::string& name = "assets") {
  std::string out = std::string(g.directed ? "digraph " : "graph ") + dot_quote(name) + " {\n";
  out += "  graph [threshold=" + dot_quote(format_double(g.threshold)) + ", kind=" +
         dot_quote(to_string(g.source_kind)) + "];\n";
  for (const auto& n : g.nodes) {
    const auto c = detail::lookup(info, n);
    out += "  " + dot_quote(n) + " [country=" + dot_quote(c.meta.country) + ", industry=" + dot_quote(c.meta.industry) +
           ", lag=" + std::to_string(c.lag) + "];\n";
  }
  const std::string arrow = g.directed ? " -> " : " -- ";
  for (const auto& e : g.edges)
    out += "  " + dot_quote(g.nodes[e.source]) + arrow + dot_quote(g.nodes[e.target]) + " [weight=" +
           dot_quote(format_double(e.weight)) + "];\n";
  return out + "}\n";
}

inline std::string to_edge_list(const AssetGraph& g) {
  std::string out = "source,target,weight\n";
  for (const auto& e : g.edges)
    out += csv_field(g.nodes[e.source]) + ',' + csv_field(g.nodes[e.target]) + ',' + format_double(e.weight) + '\n';
  return out;
}

/// Reads an edge list back into a graph. Nodes appear in first-seen order.
inline AssetGraph read_edge_list(const fs::path& csv, bool directed) {
  const auto t = read_csv(csv);
  const std::string what = "edge list '" + csv.string() + "'";
  const std::size_t sc = t.column("source", what);
  const std::size_t tc = t.column("target", what);
  const std::size_t wc = t.column("weight", what);
  AssetGraph g;
  g.directed = directed;
  std::map<std::string, std::size_t> index;
  auto node = [&](const std::string& label) {
    auto [it, fresh] = index.emplace(label, g.nodes.size());
    if (fresh) g.nodes.push_back(label);
    return it->second;
  };
  for (const auto& row : t.rows) {
    const std::size_t s = node(row[sc]);
    const std::size_t d = node(row[tc]);
    g.edges.push_back({s, d, parse_double(row[wc], what)});
  }
  return g;
}

// --------------------------------------------------------------- embeddings

inline void write_embedding(const fs::path& csv, const Embedding& e, const NodeInfo& info,
                            const json& params = json::object()) {
  static const char* axes[] = {"x", "y", "z"};
  std::vector<std::string> header{"label"};
  for (std::size_t a = 0; a < e.dims; ++a) header.push_back(a < 3 ? axes[a] : "d" + std::to_string(a + 1));
  for (const char* h : {"country", "industry", "sub_industry", "lag"}) header.push_back(h);
  std::string out = csv_row(header);
  for (std::size_t i = 0; i < e.labels.size(); ++i) {
    const auto c = detail::lookup(info, e.labels[i]);
    std::vector<std::string> row{e.labels[i]};
    for (std::size_t a = 0; a < e.dims; ++a) row.push_back(format_double(e.at(i, a)));
    row.insert(row.end(), {c.meta.country, c.meta.industry, c.meta.sub_industry, std::to_string(c.lag)});
    out += csv_row(row);
  }
  write_text(csv, out);
  write_json(sidecar_path(csv), {{"dims", e.dims}, {"points", e.labels.size()}, {"stress", e.stress}, {"params", params}});
}

// --------------------------------------------------------------- centrality

/// Wide CSV: label, metadata, then one column per measure.
inline void write_centrality(const fs::path& csv, const CentralityReport& rep, const NodeInfo& info,
                             const json& params = json::object(), std::size_t top = kDefaultTopK) {
  std::vector<std::string> header{"label", "country", "industry", "sub_industry", "lag"};
  for (Measure m : rep.measures) header.push_back(to_string(m));
  std::string out = csv_row(header);
  for (std::size_t i = 0; i < rep.nodes.size(); ++i) {
    const auto c = detail::lookup(info, rep.nodes[i]);
    std::vector<std::string> row{rep.nodes[i], c.meta.country, c.meta.industry, c.meta.sub_industry,
                                 std::to_string(c.lag)};
    for (Measure m : rep.measures) row.push_back(format_double(rep.at(m)[i]));
    out += csv_row(row);
  }
  write_text(csv, out);

  json measures = json::object();
  for (Measure m : rep.measures) {
    json list = json::array();
    for (const auto& r : rep.top(m, top)) {
      const auto c = detail::lookup(info, r.label);
      list.push_back({{"label", r.label}, {"country", c.meta.country}, {"industry", c.meta.industry}, {"score", r.score}});
    }
    measures[to_string(m)] = {{"ascending", ranks_ascending(m)}, {"top", list}};
  }
  write_json(sidecar_path(csv), {{"nodes", rep.nodes.size()}, {"top_k", top}, {"params", params}, {"measures", measures}});
}

struct CentralityFile {
  CentralityReport report;
  NodeInfo info;
};

inline CentralityFile read_centrality(const fs::path& csv) {
  const auto t = read_csv(csv);
  const std::string what = "centrality report '" + csv.string() + "'";
  require(t.header.size() >= 5 && t.header[0] == "label", ErrorCode::ParseError, what + " has an unexpected header");
  CentralityFile f;
  for (std::size_t c = 5; c < t.header.size(); ++c) f.report.measures.push_back(parse_measure(t.header[c]));
  for (Measure m : f.report.measures) f.report.values[m] = {};
  for (const auto& row : t.rows) {
    PanelColumn col;
    col.label = row[0];
    col.meta = {row[1], row[2], row[3]};
    col.lag = static_cast<std::size_t>(parse_double(row[4], what));
    col.ticker = col.label.substr(0, col.label.size() - col.lag);
    f.info[col.label] = col;
    f.report.nodes.push_back(row[0]);
    for (std::size_t c = 5; c < row.size(); ++c)
      f.report.values[f.report.measures[c - 5]].push_back(parse_double(row[c], what));
  }
  return f;
}

/// Plain-text top-K table for one measure.
inline std::string format_top_table(const std::string& title, const std::vector<RankedEntry>& rows, const NodeInfo& info) {
  std::ostringstream out;
  out << title << '\n';
  if (rows.empty()) {
    out << "  (no nodes)\n";
    return out.str();
  }
  char line[512];
  std::snprintf(line, sizeof line, "  %-4s %-14s %-16s %-28s %s\n", "rank", "label", "country", "industry", "score");
  out << line;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto c = detail::lookup(info, rows[i].label);
    std::snprintf(line, sizeof line, "  %-4zu %-14s %-16s %-28s %.6g\n", i + 1, rows[i].label.c_str(),
                  c.meta.country.c_str(), c.meta.industry.c_str(), rows[i].score);
    out << line;
  }
  return out.str();
}

/// CSV top-K table: measure,rank,label,country,industry,sub_industry,score.
inline std::string top_table_csv(const std::string& measure, const std::vector<RankedEntry>& rows,
                                 const NodeInfo& info) {
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto c = detail::lookup(info, rows[i].label);
    out += csv_row({measure, std::to_string(i + 1), rows[i].label, c.meta.country, c.meta.industry,
                    c.meta.sub_industry, format_double(rows[i].score)});
  }
  return out;
}

// --------------------------------------------------------------------- flows

inline std::string ranking_csv(const std::vector<RankedEntry>& ranked, const NodeInfo& info) {
  std::string out = "label,country,industry,sub_industry,score\n";
  for (const auto& r : ranked) {
    const auto c = detail::lookup(info, r.label);
    out += csv_row({r.label, c.meta.country, c.meta.industry, c.meta.sub_industry, format_double(r.score)});
  }
  return out;
}

/// <dir>/<group>_receivers.csv, <group>_senders.csv and <group>_flows.json.
inline void write_flow_report(const fs::path& dir, const FlowReport& rep, const NodeInfo& info,
                              const json& params = json::object()) {
  write_text(dir / (rep.group + "_receivers.csv"), ranking_csv(rep.receivers, info));
  write_text(dir / (rep.group + "_senders.csv"), ranking_csv(rep.senders, info));
  auto to_json = [&](const std::vector<RankedEntry>& v) {
    json a = json::array();
    for (const auto& r : v) {
      const auto c = detail::lookup(info, r.label);
      a.push_back({{"label", r.label},
                   {"country", c.meta.country},
                   {"industry", c.meta.industry},
                   {"sub_industry", c.meta.sub_industry},
                   {"score", r.score}});
    }
    return a;
  };
  write_json(dir / (rep.group + "_flows.json"), {{"group", rep.group},
                                                 {"top_k", rep.top_k},
                                                 {"params", params},
                                                 {"top_receivers", to_json(rep.top_receivers())},
                                                 {"top_senders", to_json(rep.top_senders())}});
}

// ----------------------------------------------------------------- reports

inline void write_noise_floor(const fs::path& path, const NoiseFloor& nf, const json& params = json::object()) {
  write_json(path, {{"min_distance_mean", nf.min_distance_mean},
                    {"min_distance_std", nf.min_distance_std},
                    {"simulations", nf.samples.size()},
                    {"params", params},
                    {"samples", nf.samples}});
}

inline NoiseFloor read_noise_floor(const fs::path& path) {
  const json j = read_json(path);
  NoiseFloor nf;
  nf.min_distance_mean = j.at("min_distance_mean").get<double>();
  nf.min_distance_std = j.at("min_distance_std").get<double>();
  nf.samples = j.at("samples").get<std::vector<double>>();
  return nf;
}

inline json ground_truth_json(const SynthPanel& p, const json& params) {
  json edges = json::array();
  for (const auto& e : p.edges)
    edges.push_back({{"source", e.source}, {"target", e.target}, {"weight", e.weight}, {"lag", e.lag}});
  json j = {{"kind", p.kind}, {"params", params}, {"series", p.tickers}, {"edges", edges}};
  j["analytic_te_bits"] = p.analytic_te_bits ? json(*p.analytic_te_bits) : json(nullptr);
  return j;
}

}  // namespace teflow::io
