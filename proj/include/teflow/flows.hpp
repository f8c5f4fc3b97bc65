#pragma once

// Group-level flow analysis: swap a group of stocks into the base panel and
// rank which outside stocks receive, and which group stocks send, the most
// summed effective transfer entropy.

#include <algorithm>
#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "teflow/error.hpp"
#include "teflow/labeled_matrix.hpp"
#include "teflow/panel.hpp"
#include "teflow/ranking.hpp"

namespace teflow {

inline constexpr std::size_t kDefaultTopK = 5;

struct GroupSpec {
  std::string name;
  std::vector<std::string> remove_labels;
  std::vector<PriceSeries> add_series;
};

struct FlowReport {
  std::string group;
  std::vector<RankedEntry> receivers;  // full ranking, best first
  std::vector<RankedEntry> senders;
  std::size_t top_k = kDefaultTopK;

  std::vector<RankedEntry> top_receivers() const { return top_k_of(receivers); }
  std::vector<RankedEntry> top_senders() const { return top_k_of(senders); }

 private:
  std::vector<RankedEntry> top_k_of(const std::vector<RankedEntry>& r) const { return teflow::top_k(r, top_k); }
};

/// Series list of the group panel: base minus removed tickers, then the
/// group's series, in that order.
inline std::vector<PriceSeries> group_series(const std::vector<PriceSeries>& base, const GroupSpec& group) {
  std::unordered_set<std::string> base_tickers;
  for (const auto& s : base) base_tickers.insert(s.ticker);
  std::unordered_set<std::string> removed;
  for (const auto& label : group.remove_labels) {
    require(base_tickers.count(label) > 0, ErrorCode::UnknownLabel,
            "group '" + group.name + "' removes '" + label + "', which is not in the base set");
    removed.insert(label);
  }

  std::vector<PriceSeries> out;
  std::unordered_set<std::string> kept;
  for (const auto& s : base) {
    if (removed.count(s.ticker)) continue;
    out.push_back(s);
    kept.insert(s.ticker);
  }
  for (const auto& s : group.add_series) {
    require(kept.insert(s.ticker).second, ErrorCode::DuplicateLabel,
            "group '" + group.name + "' adds '" + s.ticker + "', which is already in the panel");
    out.push_back(s);
  }
  return out;
}

/// Lag-1 augmented panel over (base - removed + added), aligned to `cal`.
inline ReturnPanel build_group_panel(const std::vector<PriceSeries>& base, const GroupSpec& group,
                                     const TradingCalendar& cal, std::size_t max_lag = 1) {
  return augment_lagged(build_panel(group_series(base, group), cal), max_lag);
}

namespace detail {

inline bool is_lagged(const std::string& label) { return !label.empty() && label.back() == '*'; }

struct FlowIndex {
  std::vector<std::size_t> sources;       // lagged group columns
  std::vector<std::size_t> destinations;  // lag-0 columns outside the group
};

inline FlowIndex flow_index(const LabeledMatrix& ete, const std::vector<std::string>& group_labels) {
  FlowIndex idx;
  std::unordered_set<std::string> group(group_labels.begin(), group_labels.end());
  for (const auto& g : group_labels) {
    const std::string lagged = lagged_label(g, 1);
    require(ete.has_label(lagged), ErrorCode::UnknownLabel, "lagged group column '" + lagged + "' not in matrix");
    idx.sources.push_back(ete.index_of(lagged));
  }
  for (std::size_t i = 0; i < ete.size(); ++i) {
    const auto& label = ete.labels()[i];
    if (!is_lagged(label) && !group.count(label)) idx.destinations.push_back(i);
  }
  return idx;
}

}  // namespace detail

/// Score of each lag-0 stock outside the group: sum of ETE received from the
/// group's lag-1 columns. Negative entries are summed as they are. `top` > 0
/// cuts the ranking to the top entries plus draws.
inline std::vector<RankedEntry> reception_ranking(const LabeledMatrix& ete, const std::vector<std::string>& group_labels,
                                                  std::size_t top = 0) {
  const auto idx = detail::flow_index(ete, group_labels);
  std::vector<std::string> labels;
  std::vector<double> scores;
  for (std::size_t d : idx.destinations) {
    double s = 0.0;
    for (std::size_t src : idx.sources) s += ete(src, d);
    labels.push_back(ete.labels()[d]);
    scores.push_back(s);
  }
  auto ranked = rank(labels, scores);
  return top > 0 ? top_k(ranked, top) : ranked;
}

/// Score of each lag-1 group column: sum of ETE sent to the lag-0 stocks
/// outside the group.
inline std::vector<RankedEntry> emission_ranking(const LabeledMatrix& ete, const std::vector<std::string>& group_labels,
                                                 std::size_t top = 0) {
  const auto idx = detail::flow_index(ete, group_labels);
  std::vector<std::string> labels;
  std::vector<double> scores;
  for (std::size_t src : idx.sources) {
    double s = 0.0;
    for (std::size_t d : idx.destinations) s += ete(src, d);
    labels.push_back(ete.labels()[src]);
    scores.push_back(s);
  }
  auto ranked = rank(labels, scores);
  return top > 0 ? top_k(ranked, top) : ranked;
}

inline FlowReport flow_report(const LabeledMatrix& ete, const GroupSpec& group, std::size_t top = kDefaultTopK) {
  require_kind(ete, MatrixKind::Ete);
  std::vector<std::string> labels;
  for (const auto& s : group.add_series) labels.push_back(s.ticker);
  return {group.name, reception_ranking(ete, labels), emission_ranking(ete, labels), top};
}

}  // namespace teflow
