#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

namespace teflow {

struct RankedEntry {
  std::string label;
  double score = 0.0;
};

/// Scores closer than this (relative) count as a draw when cutting a top-K
/// list, so structurally tied nodes are not split by rounding noise.
inline constexpr double kTieTolerance = 1e-9;

inline bool scores_tie(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Full ranking, best first. Equal scores keep input order.
inline std::vector<RankedEntry> rank(const std::vector<std::string>& labels, const std::vector<double>& scores,
                                     bool ascending = false) {
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ascending ? scores[a] < scores[b] : scores[a] > scores[b];
  });
  std::vector<RankedEntry> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back({labels[i], scores[i]});
  return out;
}

/// First k entries of a ranking plus every later entry tied with the k-th.
inline std::vector<RankedEntry> top_k(const std::vector<RankedEntry>& ranked, std::size_t k) {
  if (k == 0) return {};
  if (ranked.size() <= k) return ranked;
  std::size_t end = k;
  const double cut = ranked[k - 1].score;
  while (end < ranked.size() && scores_tie(ranked[end].score, cut)) ++end;
  return {ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(end)};
}

}  // namespace teflow
