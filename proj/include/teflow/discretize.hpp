#pragma once

// Fixed-width binning of returns into integer symbols, and the joint state
// counts consumed by every entropy estimator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "teflow/error.hpp"

namespace teflow {

enum class BinMode { Global, PerSeries };

inline std::string to_string(BinMode mode) { return mode == BinMode::Global ? "global" : "per-series"; }

inline BinMode parse_bin_mode(const std::string& text) {
  if (text == "global") return BinMode::Global;
  if (text == "per-series") return BinMode::PerSeries;
  fail(ErrorCode::InvalidArgument, "bin mode must be 'global' or 'per-series', got '" + text + "'");
}

/// Bins [lo + (s-1)*width, lo + s*width) for s = 1..n_bins, the last bin closed.
/// Edges are integer multiples of width, so lo and hi are stored as multiples.
struct BinningSpec {
  long long lo_index = 0;
  long long hi_index = 1;
  double width = 0.1;
  BinMode mode = BinMode::Global;

  double lo() const { return static_cast<double>(lo_index) * width; }
  double hi() const { return static_cast<double>(hi_index) * width; }
  int n_bins() const { return static_cast<int>(hi_index - lo_index); }

  bool operator==(const BinningSpec&) const = default;
};

namespace detail {
// Values within this fraction of a bin of an edge snap onto it, which absorbs
// the representation error of decimal edges like -0.2 = -2 * 0.1.
inline constexpr double kEdgeSnap = 1e-9;
}  // namespace detail

/// Fits edges to the data. Global mode pools every column; per-series mode
/// expects exactly one column. Extremes are rounded outward to multiples of
/// width; a zero-span range is widened to a single bin.
inline BinningSpec fit_bins(std::span<const std::vector<double>> columns, double width, BinMode mode) {
  require(std::isfinite(width), ErrorCode::InvalidArgument, "bin width must be finite");
  require(width > 0.0, ErrorCode::ZeroWidth, "bin width must be positive");
  require(mode == BinMode::Global || columns.size() == 1, ErrorCode::InvalidArgument,
          "per-series binning is fit on exactly one column");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  for (const auto& col : columns) {
    for (double v : col) {
      require(std::isfinite(v), ErrorCode::InvalidArgument, "non-finite value in binning data");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      ++count;
    }
  }
  require(count > 0, ErrorCode::EmptyData, "no data to fit bins on");

  BinningSpec spec;
  spec.width = width;
  spec.mode = mode;
  spec.lo_index = static_cast<long long>(std::floor(lo / width + detail::kEdgeSnap));
  spec.hi_index = static_cast<long long>(std::ceil(hi / width - detail::kEdgeSnap));
  if (spec.hi_index <= spec.lo_index) spec.hi_index = spec.lo_index + 1;
  return spec;
}

inline BinningSpec fit_bins(const std::vector<double>& column, double width, BinMode mode = BinMode::PerSeries) {
  return fit_bins(std::span<const std::vector<double>>(&column, 1), width, mode);
}

/// Symbol 1..n_bins of a single value.
inline int symbol_of(double x, const BinningSpec& spec) {
  const double pos = x / spec.width - static_cast<double>(spec.lo_index);
  const double n = spec.n_bins();
  if (!(pos >= -detail::kEdgeSnap && pos <= n + detail::kEdgeSnap))
    fail(ErrorCode::OutOfRange, "value " + std::to_string(x) + " outside bin range [" + std::to_string(spec.lo()) +
                                    ", " + std::to_string(spec.hi()) + "]");
  const auto bin = static_cast<long long>(std::floor(pos + detail::kEdgeSnap));
  return static_cast<int>(std::clamp<long long>(bin + 1, 1, spec.n_bins()));
}

struct SymbolSeries {
  std::vector<int> symbols;
  BinningSpec spec;

  std::size_t size() const { return symbols.size(); }
};

inline SymbolSeries symbolize(std::span<const double> returns, const BinningSpec& spec) {
  SymbolSeries out{{}, spec};
  out.symbols.reserve(returns.size());
  for (double x : returns) out.symbols.push_back(symbol_of(x, spec));
  return out;
}

inline SymbolSeries symbolize(const std::vector<double>& returns, const BinningSpec& spec) {
  return symbolize(std::span<const double>(returns), spec);
}

/// Sparse joint counts of (next destination symbol, k destination past
/// symbols, l source past symbols). Entries are keyed by a packed base-B code:
/// digits are (next, dest[n], ..., dest[n-k+1], src[n], ..., src[n-l+1]),
/// most significant first, each stored as symbol - 1.
class JointCounts {
 public:
  struct State {
    int next = 0;
    std::vector<int> dest_past;
    std::vector<int> source_past;

    auto operator<=>(const State&) const = default;
  };

  JointCounts(int n_bins, int k, int l) : n_bins_(n_bins), k_(k), l_(l) {
    require(n_bins >= 1, ErrorCode::InvalidArgument, "n_bins must be positive");
    require(k >= 1 && l >= 1, ErrorCode::InvalidArgument, "history lengths k and l must be at least 1");
    require(k <= 4 && l <= 4, ErrorCode::InvalidArgument, "history lengths above 4 are not supported");
    double digits = 1.0 + k + l;
    require(digits * std::log2(static_cast<double>(n_bins)) < 62.0, ErrorCode::InvalidArgument,
            "joint state space too large to encode");
  }

  int n_bins() const { return n_bins_; }
  int k() const { return k_; }
  int l() const { return l_; }
  std::uint64_t total() const { return total_; }
  const std::map<std::uint64_t, std::uint64_t>& table() const { return table_; }

  void add(std::uint64_t key, std::uint64_t count = 1) {
    table_[key] += count;
    total_ += count;
  }

  std::uint64_t encode(const State& s) const {
    std::uint64_t key = digit(s.next);
    for (int v : s.dest_past) key = key * n_bins_ + digit(v);
    for (int v : s.source_past) key = key * n_bins_ + digit(v);
    return key;
  }

  State decode(std::uint64_t key) const {
    State s;
    s.source_past.resize(static_cast<std::size_t>(l_));
    s.dest_past.resize(static_cast<std::size_t>(k_));
    for (int i = l_ - 1; i >= 0; --i) {
      s.source_past[static_cast<std::size_t>(i)] = static_cast<int>(key % n_bins_) + 1;
      key /= n_bins_;
    }
    for (int i = k_ - 1; i >= 0; --i) {
      s.dest_past[static_cast<std::size_t>(i)] = static_cast<int>(key % n_bins_) + 1;
      key /= n_bins_;
    }
    s.next = static_cast<int>(key) + 1;
    return s;
  }

  std::uint64_t count(const State& s) const {
    auto it = table_.find(encode(s));
    return it == table_.end() ? 0 : it->second;
  }

  /// Marginal over the selected coordinates. Coordinate 0 is the next symbol,
  /// 1..k the destination history, k+1..k+l the source history. Keys of the
  /// result list the kept symbols in coordinate order.
  std::map<std::vector<int>, std::uint64_t> marginal(const std::vector<std::size_t>& keep) const {
    std::map<std::vector<int>, std::uint64_t> out;
    for (const auto& [key, c] : table_) {
      const State s = decode(key);
      std::vector<int> flat;
      flat.reserve(1 + s.dest_past.size() + s.source_past.size());
      flat.push_back(s.next);
      flat.insert(flat.end(), s.dest_past.begin(), s.dest_past.end());
      flat.insert(flat.end(), s.source_past.begin(), s.source_past.end());
      std::vector<int> reduced;
      reduced.reserve(keep.size());
      for (std::size_t idx : keep) reduced.push_back(flat.at(idx));
      out[reduced] += c;
    }
    return out;
  }

 private:
  std::uint64_t digit(int symbol) const {
    require(symbol >= 1 && symbol <= n_bins_, ErrorCode::OutOfRange,
            "symbol " + std::to_string(symbol) + " outside 1.." + std::to_string(n_bins_));
    return static_cast<std::uint64_t>(symbol - 1);
  }

  int n_bins_;
  int k_;
  int l_;
  std::uint64_t total_ = 0;
  std::map<std::uint64_t, std::uint64_t> table_;
};

/// Counts (dest[n+1], dest[n..n-k+1], source[n..n-l+1]) for n from
/// max(k,l)-1 to T-2.
inline JointCounts joint_counts(const SymbolSeries& dest, const SymbolSeries& source, int k, int l) {
  require(dest.size() == source.size(), ErrorCode::LengthMismatch,
          "series lengths differ: " + std::to_string(dest.size()) + " vs " + std::to_string(source.size()));
  const int n_bins = std::max(dest.spec.n_bins(), source.spec.n_bins());
  JointCounts counts(n_bins, k, l);
  const std::size_t start = static_cast<std::size_t>(std::max(k, l) - 1);
  const std::size_t T = dest.size();
  for (std::size_t n = start; n + 1 < T; ++n) {
    JointCounts::State s;
    s.next = dest.symbols[n + 1];
    for (int i = 0; i < k; ++i) s.dest_past.push_back(dest.symbols[n - static_cast<std::size_t>(i)]);
    for (int i = 0; i < l; ++i) s.source_past.push_back(source.symbols[n - static_cast<std::size_t>(i)]);
    counts.add(counts.encode(s));
  }
  return counts;
}

}  // namespace teflow
