#pragma once

// Centrality measures on asset graphs (hop distances, unweighted edges) and
// node strengths on full matrices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "teflow/error.hpp"
#include "teflow/graph.hpp"
#include "teflow/labeled_matrix.hpp"
#include "teflow/parallel.hpp"
#include "teflow/ranking.hpp"

namespace teflow {

enum class Measure { ND, ND_in, ND_out, EC, EC_in, EC_out, CC, HC, HC_in, HC_out, BC, BC_dir, NS, NS_in, NS_out };

inline std::string to_string(Measure m) {
  switch (m) {
    case Measure::ND: return "ND";
    case Measure::ND_in: return "ND_in";
    case Measure::ND_out: return "ND_out";
    case Measure::EC: return "EC";
    case Measure::EC_in: return "EC_in";
    case Measure::EC_out: return "EC_out";
    case Measure::CC: return "CC";
    case Measure::HC: return "HC";
    case Measure::HC_in: return "HC_in";
    case Measure::HC_out: return "HC_out";
    case Measure::BC: return "BC";
    case Measure::BC_dir: return "BC_dir";
    case Measure::NS: return "NS";
    case Measure::NS_in: return "NS_in";
    case Measure::NS_out: return "NS_out";
  }
  return "?";
}

inline Measure parse_measure(const std::string& text) {
  for (int i = 0; i <= static_cast<int>(Measure::NS_out); ++i)
    if (to_string(static_cast<Measure>(i)) == text) return static_cast<Measure>(i);
  fail(ErrorCode::InvalidArgument, "unknown centrality measure '" + text + "'");
}

/// Closeness is a mean distance, so smaller is more central.
inline bool ranks_ascending(Measure m) { return m == Measure::CC; }

inline std::vector<Measure> default_graph_measures(bool directed) {
  if (directed)
    return {Measure::ND_in, Measure::ND_out, Measure::EC_in, Measure::EC_out,
            Measure::CC,    Measure::HC_in,  Measure::HC_out, Measure::BC_dir};
  return {Measure::ND, Measure::EC, Measure::CC, Measure::HC, Measure::BC};
}

inline std::vector<Measure> default_strength_measures(bool directed) {
  if (directed) return {Measure::NS_in, Measure::NS_out, Measure::NS};
  return {Measure::NS};
}

struct CentralityReport {
  std::vector<std::string> nodes;
  std::vector<Measure> measures;
  std::map<Measure, std::vector<double>> values;

  const std::vector<double>& at(Measure m) const {
    auto it = values.find(m);
    if (it == values.end()) fail(ErrorCode::InvalidArgument, "measure " + to_string(m) + " not in report");
    return it->second;
  }

  std::vector<RankedEntry> ranking(Measure m) const { return rank(nodes, at(m), ranks_ascending(m)); }

  /// Top k nodes for a measure, extended past k on draws.
  std::vector<RankedEntry> top(Measure m, std::size_t k = 5) const { return top_k(ranking(m), k); }
};

namespace detail {

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

inline std::vector<std::size_t> bfs_distances(const std::vector<std::vector<std::size_t>>& adj, std::size_t src) {
  std::vector<std::size_t> dist(adj.size(), kUnreachable);
  std::deque<std::size_t> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : adj[u]) {
      if (dist[v] != kUnreachable) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

struct Closeness {
  double mean_distance = 0.0;  // 0 when nothing is reachable
  double harmonic = 0.0;
};

inline Closeness closeness_from(const std::vector<std::size_t>& dist, std::size_t self) {
  // Histogram first so structurally equivalent nodes get bitwise-equal sums.
  std::vector<std::uint64_t> at_hop(dist.size() + 1, 0);
  std::uint64_t reached = 0;
  std::uint64_t total = 0;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (v == self || dist[v] == kUnreachable) continue;
    ++at_hop[dist[v]];
    ++reached;
    total += dist[v];
  }
  Closeness c;
  if (reached > 0) c.mean_distance = static_cast<double>(total) / static_cast<double>(reached);
  long double harmonic = 0.0L;
  for (std::size_t h = 1; h < at_hop.size(); ++h)
    if (at_hop[h] > 0) harmonic += static_cast<long double>(at_hop[h]) / static_cast<long double>(h);
  c.harmonic = static_cast<double>(harmonic);
  return c;
}

/// Brandes' accumulation over unweighted edges, in extended precision and
/// rounded once at the end. For undirected adjacency each unordered pair is
/// counted twice; `scale` 0.5 halves it before rounding.
inline std::vector<double> brandes(const std::vector<std::vector<std::size_t>>& adj, const Parallelism& par,
                                   long double scale = 1.0L) {
  const std::size_t n = adj.size();
  std::vector<std::vector<long double>> partial(n);
  parallel_for(n, par, [&](std::size_t s) {
    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<std::vector<std::size_t>> preds(n);
    std::vector<long double> sigma(n, 0.0L);
    std::vector<std::size_t> dist(n, kUnreachable);
    sigma[s] = 1.0L;
    dist[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (std::size_t w : adj[v]) {
        if (dist[w] == kUnreachable) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    std::vector<long double> delta(n, 0.0L);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t w = *it;
      for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0L + delta[w]);
    }
    delta[s] = 0.0L;
    partial[s] = std::move(delta);
  });
  std::vector<double> bc(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    long double sum = 0.0L;
    for (std::size_t s = 0; s < n; ++s) sum += partial[s][v];
    bc[v] = static_cast<double>(sum * scale);
  }
  return bc;
}

inline std::vector<std::size_t> weak_components(const AssetGraph& g, std::size_t& count) {
  const auto adj = g.out_neighbors();
  const auto radj = g.in_neighbors();
  std::vector<std::size_t> comp(g.node_count(), kUnreachable);
  count = 0;
  for (std::size_t s = 0; s < g.node_count(); ++s) {
    if (comp[s] != kUnreachable) continue;
    std::deque<std::size_t> queue{s};
    comp[s] = count;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (const auto* nb : {&adj[u], &radj[u]})
        for (std::size_t v : *nb)
          if (comp[v] == kUnreachable) {
            comp[v] = count;
            queue.push_back(v);
          }
    }
    ++count;
  }
  return comp;
}

inline constexpr std::size_t kPowerMaxIters = 100000;
inline constexpr double kPowerTol = 1e-13;

/// Strongly connected blocks of the nodes in `members` along `follow` edges,
/// listed downstream first (Tarjan order).
inline std::vector<std::vector<std::size_t>> strong_blocks(const std::vector<std::vector<std::size_t>>& follow,
                                                          const std::vector<std::size_t>& members,
                                                          const std::vector<std::size_t>& local_index) {
  const std::size_t m = members.size();
  std::vector<std::size_t> index(m, kUnreachable), low(m, 0), stack;
  std::vector<bool> on_stack(m, false);
  std::vector<std::vector<std::size_t>> blocks;
  std::size_t counter = 0;
  // Explicit call stack of (node, next edge) pairs.
  std::vector<std::pair<std::size_t, std::size_t>> calls;
  for (std::size_t root = 0; root < m; ++root) {
    if (index[root] != kUnreachable) continue;
    calls.push_back({root, 0});
    while (!calls.empty()) {
      auto& [v, edge] = calls.back();
      if (edge == 0 && index[v] == kUnreachable) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      const auto& out = follow[members[v]];
      if (edge < out.size()) {
        const std::size_t w = local_index[out[edge++]];
        if (index[w] == kUnreachable) {
          calls.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> block;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          block.push_back(w);
        } while (w != v);
        std::sort(block.begin(), block.end());
        blocks.push_back(std::move(block));
      }
      const std::size_t done = v;
      calls.pop_back();
      if (!calls.empty()) low[calls.back().first] = std::min(low[calls.back().first], low[done]);
    }
  }
  return blocks;
}

/// Power iteration on A + I over one strongly connected block, whose Perron
/// root is simple. Writes a unit 2-norm vector over the block into `x` and
/// returns the spectral radius.
inline double block_perron(const std::vector<std::vector<std::size_t>>& follow, const std::vector<std::size_t>& members,
                           const std::vector<std::size_t>& local_index, const std::vector<std::size_t>& block,
                           const std::vector<std::size_t>& block_of, std::size_t id, std::vector<double>& x) {
  const std::size_t b = block.size();
  std::vector<std::size_t> slot(members.size(), kUnreachable);
  for (std::size_t i = 0; i < b; ++i) slot[block[i]] = i;
  std::vector<double> cur(b, 1.0 / std::sqrt(static_cast<double>(b))), next(b);
  double lambda = 1.0;
  for (std::size_t iter = 0; iter < kPowerMaxIters; ++iter) {
    for (std::size_t i = 0; i < b; ++i) {
      double s = cur[i];
      for (std::size_t v : follow[members[block[i]]]) {
        const std::size_t w = local_index[v];
        if (block_of[w] == id) s += cur[slot[w]];
      }
      next[i] = s;
    }
    double norm = 0.0;
    for (double v : next) norm += v * v;
    norm = std::sqrt(norm);
    double change = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
      next[i] /= norm;
      change = std::max(change, std::abs(next[i] - cur[i]));
    }
    cur.swap(next);
    lambda = norm;
    if (change < kPowerTol) {
      x = cur;
      // lambda approximates rho + 1.
      return lambda - 1.0 < 1e-9 ? 0.0 : lambda - 1.0;
    }
  }
  fail(ErrorCode::NonConvergence, "eigenvector centrality did not converge within " +
                                      std::to_string(kPowerMaxIters) + " iterations");
}

/// Nonnegative Perron vector of one weakly connected component, unit 2-norm,
/// or zeros when the spectral radius is 0. `follow` lists, for each node, the
/// nodes whose scores it sums. Blocks whose radius equals the component's and
/// that no other such block reaches carry their own Perron vectors; every
/// node that reaches them gets the exact extension x = (A x) / rho.
inline std::vector<double> perron_vector(const std::vector<std::vector<std::size_t>>& follow,
                                         const std::vector<std::size_t>& members,
                                         const std::vector<std::size_t>& local_index) {
  const std::size_t m = members.size();
  const auto blocks = strong_blocks(follow, members, local_index);
  const std::size_t nb = blocks.size();
  std::vector<std::size_t> block_of(m);
  for (std::size_t k = 0; k < nb; ++k)
    for (std::size_t v : blocks[k]) block_of[v] = k;

  std::vector<double> radius(nb, 0.0);
  std::vector<std::vector<double>> own(nb);
  double rho = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    radius[k] = block_perron(follow, members, local_index, blocks[k], block_of, k, own[k]);
    rho = std::max(rho, radius[k]);
  }
  std::vector<double> x(m, 0.0);
  if (rho == 0.0) return x;

  // Upstream first (reverse Tarjan order): is each block reached by a block
  // that carries the full radius?
  std::vector<bool> basic(nb), reached(nb, false);
  for (std::size_t k = 0; k < nb; ++k) basic[k] = radius[k] >= rho * (1.0 - 1e-9);
  for (std::size_t k = nb; k-- > 0;)
    for (std::size_t v : blocks[k])
      for (std::size_t u : follow[members[v]]) {
        const std::size_t to = block_of[local_index[u]];
        if (to != k && (basic[k] || reached[k])) reached[to] = true;
      }

  for (std::size_t k = 0; k < nb; ++k) {
    const auto& blk = blocks[k];
    if (basic[k] && !reached[k]) {
      for (std::size_t i = 0; i < blk.size(); ++i) x[blk[i]] = own[k][i];
      continue;
    }
    std::vector<double> inflow(blk.size(), 0.0);
    bool any = false;
    for (std::size_t i = 0; i < blk.size(); ++i) {
      for (std::size_t u : follow[members[blk[i]]]) {
        const std::size_t w = local_index[u];
        if (block_of[w] != k) inflow[i] += x[w];
      }
      any = any || inflow[i] != 0.0;
    }
    if (!any) continue;
    // Below the full radius the fixed point x = (A_kk x + inflow) / rho
    // contracts.
    for (std::size_t i = 0; i < blk.size(); ++i) x[blk[i]] = inflow[i] / rho;
    std::vector<double> next(blk.size());
    for (std::size_t iter = 0;; ++iter) {
      if (iter == kPowerMaxIters)
        fail(ErrorCode::NonConvergence, "eigenvector centrality did not converge within " +
                                            std::to_string(kPowerMaxIters) + " iterations");
      for (std::size_t i = 0; i < blk.size(); ++i) {
        double s = inflow[i];
        for (std::size_t u : follow[members[blk[i]]]) {
          const std::size_t w = local_index[u];
          if (block_of[w] == k) s += x[w];
        }
        next[i] = s / rho;
      }
      double change = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < blk.size(); ++i) {
        change = std::max(change, std::abs(next[i] - x[blk[i]]));
        scale = std::max(scale, next[i]);
        x[blk[i]] = next[i];
      }
      if (change <= kPowerTol * scale) break;
    }
  }
  double norm = 0.0;
  for (double v : x) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : x) v /= norm;
  return x;
}

/// Per-component Perron vectors with unit 2-norm, then scaled so the largest
/// score in the whole graph is 1.
inline std::vector<double> eigenvector_centrality(const AssetGraph& g,
                                                  const std::vector<std::vector<std::size_t>>& follow) {
  std::size_t ncomp = 0;
  const auto comp = weak_components(g, ncomp);
  std::vector<std::vector<std::size_t>> members(ncomp);
  std::vector<std::size_t> local(g.node_count());
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    local[v] = members[comp[v]].size();
    members[comp[v]].push_back(v);
  }
  std::vector<double> ec(g.node_count(), 0.0);
  for (const auto& mem : members) {
    const auto x = perron_vector(follow, mem, local);
    for (std::size_t i = 0; i < mem.size(); ++i) ec[mem[i]] = x[i];
  }
  const double mx = *std::max_element(ec.begin(), ec.end());
  if (mx > 0.0)
    for (double& v : ec) v /= mx;
  return ec;
}

}  // namespace detail

/// Graph centralities. Distances are hop counts along edge direction; nodes
/// that reach nothing get CC = 0.
inline CentralityReport centralities(const AssetGraph& g, std::vector<Measure> measures = {},
                                     const Parallelism& par = {}) {
  require(g.node_count() > 0, ErrorCode::EmptyGraph, "asset graph has no nodes");
  if (measures.empty()) measures = default_graph_measures(g.directed);

  const std::size_t n = g.node_count();
  const auto out_adj = g.out_neighbors();
  const auto in_adj = g.in_neighbors();

  CentralityReport report{g.nodes, measures, {}};
  bool need_dist = false;
  for (Measure m : measures) {
    switch (m) {
      case Measure::ND:
      case Measure::EC:
      case Measure::HC:
      case Measure::BC:
        require(!g.directed, ErrorCode::InvalidArgument, to_string(m) + " is defined on undirected graphs");
        break;
      case Measure::ND_in:
      case Measure::ND_out:
      case Measure::EC_in:
      case Measure::EC_out:
      case Measure::HC_in:
      case Measure::HC_out:
      case Measure::BC_dir:
        require(g.directed, ErrorCode::InvalidArgument, to_string(m) + " is defined on directed graphs");
        break;
      case Measure::CC:
        break;
      case Measure::NS:
      case Measure::NS_in:
      case Measure::NS_out:
        fail(ErrorCode::InvalidArgument, "node strength is computed on the full matrix, not a graph");
    }
    if (m == Measure::CC || m == Measure::HC || m == Measure::HC_in || m == Measure::HC_out) need_dist = true;
  }

  std::vector<detail::Closeness> out_close(n);
  std::vector<detail::Closeness> in_close(n);
  if (need_dist) {
    parallel_for(n, par, [&](std::size_t v) {
      out_close[v] = detail::closeness_from(detail::bfs_distances(out_adj, v), v);
      if (g.directed) in_close[v] = detail::closeness_from(detail::bfs_distances(in_adj, v), v);
    });
  }

  for (Measure m : measures) {
    std::vector<double> vals(n, 0.0);
    switch (m) {
      case Measure::ND:
      case Measure::ND_out:
        for (std::size_t v = 0; v < n; ++v) vals[v] = static_cast<double>(out_adj[v].size());
        break;
      case Measure::ND_in:
        for (std::size_t v = 0; v < n; ++v) vals[v] = static_cast<double>(in_adj[v].size());
        break;
      case Measure::EC:
      case Measure::EC_out:
        // Sender importance: a node scores the sum of the scores it points to.
        vals = detail::eigenvector_centrality(g, out_adj);
        break;
      case Measure::EC_in:
        vals = detail::eigenvector_centrality(g, in_adj);
        break;
      case Measure::CC:
        for (std::size_t v = 0; v < n; ++v) vals[v] = out_close[v].mean_distance;
        break;
      case Measure::HC:
      case Measure::HC_out:
        for (std::size_t v = 0; v < n; ++v) vals[v] = out_close[v].harmonic;
        break;
      case Measure::HC_in:
        for (std::size_t v = 0; v < n; ++v) vals[v] = in_close[v].harmonic;
        break;
      case Measure::BC:
        vals = detail::brandes(out_adj, par, 0.5L);
        break;
      case Measure::BC_dir:
        vals = detail::brandes(out_adj, par);
        break;
      default:
        break;
    }
    report.values[m] = std::move(vals);
  }
  return report;
}

/// Node strengths on a full matrix, diagonal excluded: NS_out is the row sum,
/// NS_in the column sum. NS is the row sum for symmetric kinds and
/// NS_in + NS_out for flow kinds. Signed entries are summed as they are.
inline CentralityReport centralities(const LabeledMatrix& m, std::vector<Measure> measures = {}) {
  const bool directed = is_flow_kind(m.kind());
  if (measures.empty()) measures = default_strength_measures(directed);
  const std::size_t n = m.size();
  require(n > 0, ErrorCode::EmptyGraph, "matrix has no labels");

  std::vector<double> row(n, 0.0);
  std::vector<double> col(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      row[i] += m(i, j);
      col[j] += m(i, j);
    }

  CentralityReport report{m.labels(), measures, {}};
  for (Measure meas : measures) {
    switch (meas) {
      case Measure::NS_out:
        report.values[meas] = row;
        break;
      case Measure::NS_in:
        report.values[meas] = col;
        break;
      case Measure::NS: {
        std::vector<double> total(row);
        if (directed)
          for (std::size_t i = 0; i < n; ++i) total[i] += col[i];
        report.values[meas] = std::move(total);
        break;
      }
      default:
        fail(ErrorCode::InvalidArgument, to_string(meas) + " needs a graph, not a full matrix");
    }
  }
  return report;
}

}  // namespace teflow
