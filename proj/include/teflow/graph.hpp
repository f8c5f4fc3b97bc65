#pragma once

// Thresholded asset graphs and entrywise binarisation.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "teflow/error.hpp"
#include "teflow/labeled_matrix.hpp"

namespace teflow {

enum class ThresholdMode { KeepBelow, KeepAbove };

inline std::string to_string(ThresholdMode mode) {
  return mode == ThresholdMode::KeepBelow ? "keep-below" : "keep-above";
}

struct GraphEdge {
  std::size_t source = 0;  // indices into AssetGraph::nodes
  std::size_t target = 0;
  double weight = 0.0;
};

/// Graph over the labels that carry at least one edge. Undirected graphs
/// store each edge once with source < target.
struct AssetGraph {
  std::vector<std::string> nodes;
  std::vector<GraphEdge> edges;
  bool directed = false;
  double threshold = 0.0;
  ThresholdMode mode = ThresholdMode::KeepBelow;
  MatrixKind source_kind = MatrixKind::Distance;

  std::size_t node_count() const { return nodes.size(); }

  std::vector<std::vector<std::size_t>> out_neighbors() const {
    std::vector<std::vector<std::size_t>> adj(nodes.size());
    for (const auto& e : edges) {
      adj[e.source].push_back(e.target);
      if (!directed) adj[e.target].push_back(e.source);
    }
    return adj;
  }

  std::vector<std::vector<std::size_t>> in_neighbors() const {
    if (!directed) return out_neighbors();
    std::vector<std::vector<std::size_t>> adj(nodes.size());
    for (const auto& e : edges) adj[e.target].push_back(e.source);
    return adj;
  }
};

/// Distance matrices keep entries strictly below the threshold; flow matrices
/// (te, rte, ete, nte) keep entries strictly above it and give directed
/// graphs. Nodes left without edges are dropped.
inline AssetGraph asset_graph(const LabeledMatrix& m, double threshold, ThresholdMode mode) {
  require(std::isfinite(threshold), ErrorCode::InvalidArgument, "threshold must be finite");
  const bool flow = is_flow_kind(m.kind());
  if (m.kind() == MatrixKind::Distance)
    require(mode == ThresholdMode::KeepBelow, ErrorCode::KindMismatch, "distance graphs keep entries below threshold");
  else if (flow)
    require(mode == ThresholdMode::KeepAbove, ErrorCode::KindMismatch, "flow graphs keep entries above threshold");
  else
    fail(ErrorCode::KindMismatch, "cannot threshold a " + to_string(m.kind()) + " matrix into an asset graph");

  const std::size_t N = m.size();
  auto passes = [&](double v) { return mode == ThresholdMode::KeepBelow ? v < threshold : v > threshold; };

  std::vector<GraphEdge> raw;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = flow ? 0 : i + 1; j < N; ++j) {
      if (i == j) continue;
      if (passes(m(i, j))) raw.push_back({i, j, m(i, j)});
    }
  }

  std::vector<std::size_t> remap(N, N);
  std::vector<bool> used(N, false);
  for (const auto& e : raw) used[e.source] = used[e.target] = true;

  AssetGraph g;
  g.directed = flow;
  g.threshold = threshold;
  g.mode = mode;
  g.source_kind = m.kind();
  for (std::size_t i = 0; i < N; ++i) {
    if (!used[i]) continue;
    remap[i] = g.nodes.size();
    g.nodes.push_back(m.labels()[i]);
  }
  g.edges.reserve(raw.size());
  for (const auto& e : raw) g.edges.push_back({remap[e.source], remap[e.target], e.weight});
  return g;
}

inline AssetGraph asset_graph(const LabeledMatrix& m, double threshold) {
  return asset_graph(m, threshold,
                     m.kind() == MatrixKind::Distance ? ThresholdMode::KeepBelow : ThresholdMode::KeepAbove);
}

/// 1 where the entry exceeds the threshold, else 0. The diagonal is always 0.
inline LabeledMatrix binarize(const LabeledMatrix& m, double threshold) {
  LabeledMatrix out(m.labels(), MatrixKind::Binary);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = (i != j && m(i, j) > threshold) ? 1.0 : 0.0;
  return out;
}

}  // namespace teflow
