#pragma once

// Shannon entropy, conditional entropies and transfer entropy on symbol
// streams, plus the all-pairs transfer entropy matrix.
//
// All probabilities are plug-in estimates (count / total) and every sum runs
// over realised states only, so 0 log 0 never appears. Results are in bits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "teflow/discretize.hpp"
#include "teflow/error.hpp"
#include "teflow/labeled_matrix.hpp"
#include "teflow/panel.hpp"
#include "teflow/parallel.hpp"

namespace teflow {

namespace detail {

inline double entropy_of_counts(const std::vector<std::uint64_t>& counts, std::uint64_t total) {
  double h = 0.0;
  const double n = static_cast<double>(total);
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

inline int max_symbol(std::span<const int> s) {
  int m = 1;
  for (int v : s) {
    require(v >= 1, ErrorCode::OutOfRange, "symbols must be positive");
    m = std::max(m, v);
  }
  return m;
}

}  // namespace detail

inline double shannon_entropy(std::span<const int> symbols) {
  require(!symbols.empty(), ErrorCode::EmptyData, "entropy of an empty series");
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(detail::max_symbol(symbols)) + 1, 0);
  for (int s : symbols) ++counts[static_cast<std::size_t>(s)];
  return detail::entropy_of_counts(counts, symbols.size());
}

inline double shannon_entropy(const SymbolSeries& sym) { return shannon_entropy(std::span<const int>(sym.symbols)); }

/// H(X|Y) = -sum p(i,j) log2 [p(i,j) / p(j)].
inline double conditional_entropy(std::span<const int> x, std::span<const int> y) {
  require(x.size() == y.size(), ErrorCode::LengthMismatch, "conditional entropy needs equal lengths");
  require(!x.empty(), ErrorCode::EmptyData, "conditional entropy of empty series");
  const auto bx = static_cast<std::size_t>(detail::max_symbol(x)) + 1;
  const auto by = static_cast<std::size_t>(detail::max_symbol(y)) + 1;
  std::vector<std::uint64_t> joint(bx * by, 0);
  std::vector<std::uint64_t> marg(by, 0);
  for (std::size_t t = 0; t < x.size(); ++t) {
    ++joint[static_cast<std::size_t>(x[t]) * by + static_cast<std::size_t>(y[t])];
    ++marg[static_cast<std::size_t>(y[t])];
  }
  // H(X|Y) = H(X,Y) - H(Y)
  return detail::entropy_of_counts(joint, x.size()) - detail::entropy_of_counts(marg, x.size());
}

inline double conditional_entropy(const SymbolSeries& x, const SymbolSeries& y) {
  return conditional_entropy(std::span<const int>(x.symbols), std::span<const int>(y.symbols));
}

/// H(X^F | X^P): entropy of tomorrow's symbol given today's, over the pairs
/// (x[n+1], x[n]).
inline double self_conditional_entropy(std::span<const int> x) {
  require(x.size() >= 2, ErrorCode::TooShort, "self-conditional entropy needs at least two symbols");
  return conditional_entropy(x.subspan(1), x.first(x.size() - 1));
}

inline double self_conditional_entropy(const SymbolSeries& x) {
  return self_conditional_entropy(std::span<const int>(x.symbols));
}

/// Transfer entropy from a JointCounts table using the single log-ratio form
/// sum p(a,b,y) log2 [p(a,b,y) p(b) / (p(a,b) p(b,y))], a = next destination
/// symbol, b = destination history, y = source history.
inline double te_from_counts(const JointCounts& jc) {
  const std::uint64_t B = static_cast<std::uint64_t>(jc.n_bins());
  std::uint64_t src_space = 1;
  for (int i = 0; i < jc.l(); ++i) src_space *= B;
  std::uint64_t hist_space = src_space;
  for (int i = 0; i < jc.k(); ++i) hist_space *= B;

  std::unordered_map<std::uint64_t, std::uint64_t> ab;
  std::unordered_map<std::uint64_t, std::uint64_t> by;
  std::unordered_map<std::uint64_t, std::uint64_t> b;
  for (const auto& [key, c] : jc.table()) {
    ab[key / src_space] += c;
    by[key % hist_space] += c;
    b[(key % hist_space) / src_space] += c;
  }
  const double n = static_cast<double>(jc.total());
  double te = 0.0;
  for (const auto& [key, c] : jc.table()) {
    const double p_aby = static_cast<double>(c) / n;
    const double p_ab = static_cast<double>(ab[key / src_space]) / n;
    const double p_by = static_cast<double>(by[key % hist_space]) / n;
    const double p_b = static_cast<double>(b[(key % hist_space) / src_space]) / n;
    te += p_aby * std::log2(p_aby * p_b / (p_ab * p_by));
  }
  return te;
}

/// Same quantity in the two-sum form: sum p log2 p(a|b,y) - sum p log2 p(a|b).
inline double te_from_counts_two_sum(const JointCounts& jc) {
  const std::size_t k = static_cast<std::size_t>(jc.k());
  const std::size_t l = static_cast<std::size_t>(jc.l());
  std::vector<std::size_t> hist_by, hist_b, next_b;
  for (std::size_t i = 1; i <= k + l; ++i) hist_by.push_back(i);
  for (std::size_t i = 1; i <= k; ++i) hist_b.push_back(i);
  next_b.push_back(0);
  next_b.insert(next_b.end(), hist_b.begin(), hist_b.end());
  const auto by = jc.marginal(hist_by);
  const auto b = jc.marginal(hist_b);
  const auto ab = jc.marginal(next_b);

  const double n = static_cast<double>(jc.total());
  double with_source = 0.0;
  double without_source = 0.0;
  for (const auto& [key, c] : jc.table()) {
    const auto s = jc.decode(key);
    std::vector<int> kb(s.dest_past);
    std::vector<int> kby(s.dest_past);
    kby.insert(kby.end(), s.source_past.begin(), s.source_past.end());
    std::vector<int> kab{s.next};
    kab.insert(kab.end(), s.dest_past.begin(), s.dest_past.end());
    const double p = static_cast<double>(c) / n;
    with_source += p * std::log2(static_cast<double>(c) / static_cast<double>(by.at(kby)));
    without_source += p * std::log2(static_cast<double>(ab.at(kab)) / static_cast<double>(b.at(kb)));
  }
  return with_source - without_source;
}

/// Transfer entropy kernel bound to one destination series. The destination
/// marginals are computed once; each source then costs one pass over the
/// series. Counting uses the identity
///   N * TE = S(a,b,y) + S(b) - S(a,b) - S(b,y),  S(z) = sum_z c(z) log2 c(z).
class TransferEntropyKernel {
 public:
  /// Packed history codes of a series: entry n - start is the base-B code of
  /// (x[n], x[n-1], ..., x[n-len+1]) for n in [start, T-2].
  static std::vector<std::uint64_t> history_codes(std::span<const int> x, int n_bins, int len, std::size_t start) {
    std::vector<std::uint64_t> out;
    if (x.size() < start + 2) return out;
    out.reserve(x.size() - 1 - start);
    for (std::size_t n = start; n + 1 < x.size(); ++n) {
      std::uint64_t key = 0;
      for (int i = 0; i < len; ++i) {
        const int s = x[n - static_cast<std::size_t>(i)];
        require(s >= 1 && s <= n_bins, ErrorCode::OutOfRange, "symbol outside 1..n_bins");
        key = key * static_cast<std::uint64_t>(n_bins) + static_cast<std::uint64_t>(s - 1);
      }
      out.push_back(key);
    }
    return out;
  }

  struct Scratch {
    std::vector<std::uint32_t> dense;
    std::vector<std::uint64_t> touched;
    std::vector<std::uint64_t> sorted;
  };

  TransferEntropyKernel(std::span<const int> dest, int n_bins, int k, int l)
      : n_bins_(n_bins), k_(k), l_(l) {
    require(k >= 1 && l >= 1, ErrorCode::InvalidArgument, "history lengths k and l must be at least 1");
    require(k <= 4 && l <= 4, ErrorCode::InvalidArgument, "history lengths above 4 are not supported");
    require(n_bins >= 1, ErrorCode::InvalidArgument, "n_bins must be positive");
    require((1.0 + k + l) * std::log2(static_cast<double>(n_bins)) < 62.0, ErrorCode::InvalidArgument,
            "joint state space too large to encode");
    start_ = static_cast<std::size_t>(std::max(k, l) - 1);
    length_ = dest.size();
    require(dest.size() > static_cast<std::size_t>(std::max(k, l)) + 1, ErrorCode::TooShort,
            "series of length " + std::to_string(dest.size()) + " too short for k=" + std::to_string(k) +
                ", l=" + std::to_string(l));
    samples_ = dest.size() - 1 - start_;

    src_space_ = pow_bins(l);
    hist_space_ = pow_bins(k);
    const std::uint64_t B = static_cast<std::uint64_t>(n_bins);

    const auto past = history_codes(dest, n_bins, k, start_);
    past_.resize(samples_);
    next_past_.resize(samples_);
    for (std::size_t i = 0; i < samples_; ++i) {
      const auto next = static_cast<std::uint64_t>(dest[start_ + i + 1] - 1);
      require(dest[start_ + i + 1] >= 1 && dest[start_ + i + 1] <= n_bins, ErrorCode::OutOfRange,
              "symbol outside 1..n_bins");
      past_[i] = past[i];
      next_past_[i] = next * hist_space_ + past[i];
    }

    xlog2x_.resize(samples_ + 1);
    xlog2x_[0] = 0.0;
    for (std::size_t c = 1; c <= samples_; ++c) xlog2x_[c] = static_cast<double>(c) * std::log2(static_cast<double>(c));

    Scratch scratch;
    s_b_ = sum_xlogx(past_, hist_space_, scratch);
    s_ab_ = sum_xlogx(next_past_, hist_space_ * B, scratch);
  }

  std::size_t start() const { return start_; }
  std::size_t samples() const { return samples_; }
  std::size_t series_length() const { return length_; }

  /// TE from a source whose history codes were built with history_codes(src,
  /// n_bins, l, start()).
  double evaluate(std::span<const std::uint64_t> source_codes, Scratch& scratch) const {
    require(source_codes.size() == samples_, ErrorCode::LengthMismatch, "source history length mismatch");
    std::vector<std::uint64_t>& keys = scratch.sorted;
    keys.resize(samples_);

    for (std::size_t i = 0; i < samples_; ++i) keys[i] = next_past_[i] * src_space_ + source_codes[i];
    const double s_aby = sum_xlogx(keys, hist_space_ * static_cast<std::uint64_t>(n_bins_) * src_space_, scratch);

    for (std::size_t i = 0; i < samples_; ++i) keys[i] = past_[i] * src_space_ + source_codes[i];
    const double s_by = sum_xlogx(keys, hist_space_ * src_space_, scratch);

    // Paired so that a source carrying no extra state cancels exactly.
    return ((s_aby - s_ab_) + (s_b_ - s_by)) / static_cast<double>(samples_);
  }

  double evaluate(std::span<const int> source) const {
    require(source.size() == length_, ErrorCode::LengthMismatch,
            "series lengths differ: " + std::to_string(length_) + " vs " + std::to_string(source.size()));
    Scratch scratch;
    const auto codes = history_codes(source, n_bins_, l_, start_);
    return evaluate(codes, scratch);
  }

 private:
  static constexpr std::uint64_t kDenseLimit = 1u << 20;

  std::uint64_t pow_bins(int e) const {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<std::uint64_t>(n_bins_);
    return r;
  }

  // Sum of c log2 c over the multiplicities of keys. Small key spaces use a
  // dense table that is reset through the list of touched cells.
  double sum_xlogx(std::span<const std::uint64_t> keys, std::uint64_t space, Scratch& scratch) const {
    double s = 0.0;
    if (space <= kDenseLimit) {
      auto& dense = scratch.dense;
      if (dense.size() < space) dense.assign(space, 0);
      auto& touched = scratch.touched;
      touched.clear();
      for (std::uint64_t key : keys) {
        if (dense[key]++ == 0) touched.push_back(key);
      }
      for (std::uint64_t key : touched) {
        s += xlog2x_[dense[key]];
        dense[key] = 0;
      }
      return s;
    }
    std::vector<std::uint64_t> copy(keys.begin(), keys.end());
    std::sort(copy.begin(), copy.end());
    std::size_t run = 1;
    for (std::size_t i = 1; i <= copy.size(); ++i) {
      if (i < copy.size() && copy[i] == copy[i - 1]) {
        ++run;
      } else {
        s += xlog2x_[run];
        run = 1;
      }
    }
    return s;
  }

  int n_bins_;
  int k_;
  int l_;
  std::size_t start_ = 0;
  std::size_t length_ = 0;
  std::size_t samples_ = 0;
  std::uint64_t src_space_ = 1;
  std::uint64_t hist_space_ = 1;
  std::vector<std::uint64_t> past_;
  std::vector<std::uint64_t> next_past_;
  std::vector<double> xlog2x_;
  double s_b_ = 0.0;
  double s_ab_ = 0.0;
};

/// TE_{source -> dest} with destination history k and source history l.
inline double transfer_entropy(std::span<const int> dest, std::span<const int> source, int n_bins, int k = 1,
                               int l = 1) {
  require(dest.size() == source.size(), ErrorCode::LengthMismatch,
          "series lengths differ: " + std::to_string(dest.size()) + " vs " + std::to_string(source.size()));
  return TransferEntropyKernel(dest, n_bins, k, l).evaluate(source);
}

inline double transfer_entropy(const SymbolSeries& dest, const SymbolSeries& source, int k = 1, int l = 1) {
  const int n_bins = std::max(dest.spec.n_bins(), source.spec.n_bins());
  return transfer_entropy(std::span<const int>(dest.symbols), std::span<const int>(source.symbols), n_bins, k, l);
}

/// All-pairs TE over pre-symbolised columns. Entry (s, d) is TE_{s -> d}; the
/// diagonal is evaluated like any other cell.
inline LabeledMatrix te_matrix(const std::vector<std::string>& labels, const std::vector<std::vector<int>>& symbols,
                               int n_bins, int k, int l, const Parallelism& par = {},
                               MatrixKind kind = MatrixKind::Te) {
  require(labels.size() == symbols.size(), ErrorCode::ShapeMismatch, "one symbol series per label required");
  const std::size_t N = labels.size();
  LabeledMatrix out(labels, kind);
  if (N == 0) return out;

  for (std::size_t c = 1; c < N; ++c)
    require(symbols[c].size() == symbols[0].size(), ErrorCode::LengthMismatch,
            "column '" + labels[c] + "' length differs from '" + labels[0] + "'");
  const std::size_t start = static_cast<std::size_t>(std::max(k, l) - 1);
  require(symbols[0].size() > static_cast<std::size_t>(std::max(k, l)) + 1, ErrorCode::TooShort,
          "series too short for transfer entropy");

  std::vector<std::vector<std::uint64_t>> source_codes(N);
  parallel_for(N, par, [&](std::size_t c) {
    source_codes[c] = TransferEntropyKernel::history_codes(symbols[c], n_bins, l, start);
  });

  parallel_for(N, par, [&](std::size_t d) {
    try {
      TransferEntropyKernel kernel(symbols[d], n_bins, k, l);
      TransferEntropyKernel::Scratch scratch;
      for (std::size_t s = 0; s < N; ++s) out(s, d) = kernel.evaluate(source_codes[s], scratch);
    } catch (const Error& e) {
      throw Error(e.code(), "transfer entropy into '" + labels[d] + "': " + e.what());
    }
  });
  return out;
}

inline std::vector<std::vector<int>> symbolize_panel(const ReturnPanel& panel, const BinningSpec& spec) {
  std::vector<std::vector<int>> out(panel.cols());
  for (std::size_t c = 0; c < panel.cols(); ++c) {
    try {
      out[c] = symbolize(panel.values(c), spec).symbols;
    } catch (const Error& e) {
      throw Error(e.code(), "column '" + panel.column(c).label + "': " + e.what());
    }
  }
  return out;
}

/// Symbol streams of every panel column. Global mode fits one spec on all
/// columns; per-series mode fits each column alone. `n_bins` is the largest
/// bin count, usable as a common encoding base.
struct PanelSymbols {
  std::vector<std::vector<int>> symbols;
  std::vector<BinningSpec> specs;  // one per column
  int n_bins = 1;
};

inline PanelSymbols discretize_panel(const ReturnPanel& panel, double width, BinMode mode) {
  PanelSymbols out;
  if (mode == BinMode::Global) {
    const auto& cols = panel.all_values();
    const auto spec = fit_bins(std::span<const std::vector<double>>(cols), width, BinMode::Global);
    out.specs.assign(panel.cols(), spec);
  } else {
    for (std::size_t c = 0; c < panel.cols(); ++c) out.specs.push_back(fit_bins(panel.values(c), width, BinMode::PerSeries));
  }
  out.symbols.resize(panel.cols());
  for (std::size_t c = 0; c < panel.cols(); ++c) {
    out.symbols[c] = symbolize(panel.values(c), out.specs[c]).symbols;
    out.n_bins = std::max(out.n_bins, static_cast<int>(out.specs[c].n_bins()));
  }
  return out;
}

inline LabeledMatrix te_matrix(const ReturnPanel& panel, const BinningSpec& spec, int k = 1, int l = 1,
                               const Parallelism& par = {}) {
  return te_matrix(panel.labels(), symbolize_panel(panel, spec), spec.n_bins(), k, l, par);
}

}  // namespace teflow
