#pragma once

// Shuffle surrogates: randomized TE baseline, effective and normalised TE,
// and the correlation-distance noise floor.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "teflow/correlation.hpp"
#include "teflow/discretize.hpp"
#include "teflow/error.hpp"
#include "teflow/infotheory.hpp"
#include "teflow/labeled_matrix.hpp"
#include "teflow/panel.hpp"
#include "teflow/parallel.hpp"

namespace teflow {

inline constexpr std::size_t kDefaultSurrogates = 25;
inline constexpr std::size_t kDefaultNoiseSims = 1000;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Seed of stream `stream` in simulation `sim`. Pure function of its inputs,
/// so results do not depend on which worker runs which simulation.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t sim, std::uint64_t stream) {
  return detail::splitmix64(detail::splitmix64(detail::splitmix64(master) ^ sim) ^ (stream * 0xd1b54a32d192ed03ULL));
}

struct SurrogatePlan {
  std::size_t n_sims = kDefaultSurrogates;
  std::uint64_t master_seed = 0;

  std::uint64_t seed(std::size_t sim, std::size_t stream) const { return derive_seed(master_seed, sim, stream); }
};

/// Uniform random permutation in place (Fisher-Yates, drawing j in [0, i]).
template <typename T>
void shuffle_in_place(std::span<T> x, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = x.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(x[i - 1], x[pick(rng)]);
  }
}

template <typename T>
std::vector<T> shuffle_series(std::vector<T> x, std::uint64_t seed) {
  shuffle_in_place(std::span<T>(x), seed);
  return x;
}

/// Mean TE matrix over plan.n_sims surrogate panels; in each simulation every
/// column is shuffled independently with seed plan.seed(sim, column).
inline LabeledMatrix rte_matrix(const std::vector<std::string>& labels, const std::vector<std::vector<int>>& symbols,
                                int n_bins, int k, int l, const SurrogatePlan& plan, const Parallelism& par = {}) {
  require(plan.n_sims >= 1, ErrorCode::InvalidArgument, "at least one surrogate simulation is required");
  LabeledMatrix sum(labels, MatrixKind::Rte);
  for (std::size_t sim = 0; sim < plan.n_sims; ++sim) {
    std::vector<std::vector<int>> shuffled(symbols);
    parallel_for(shuffled.size(), par, [&](std::size_t c) {
      shuffle_in_place(std::span<int>(shuffled[c]), plan.seed(sim, c));
    });
    const auto te = te_matrix(labels, shuffled, n_bins, k, l, par);
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (std::size_t j = 0; j < labels.size(); ++j) sum(i, j) += te(i, j);
  }
  const double inv = 1.0 / static_cast<double>(plan.n_sims);
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = 0; j < labels.size(); ++j) sum(i, j) *= inv;
  return sum;
}

inline LabeledMatrix rte_matrix(const ReturnPanel& panel, const BinningSpec& spec, int k, int l,
                                const SurrogatePlan& plan, const Parallelism& par = {}) {
  return rte_matrix(panel.labels(), symbolize_panel(panel, spec), spec.n_bins(), k, l, plan, par);
}

/// ETE = TE - RTE, negative entries kept.
inline LabeledMatrix ete_matrix(const LabeledMatrix& te, const LabeledMatrix& rte) {
  require_kind(te, MatrixKind::Te);
  require_kind(rte, MatrixKind::Rte);
  require_same_labels(te, rte);
  LabeledMatrix out(te.labels(), MatrixKind::Ete);
  for (std::size_t i = 0; i < te.size(); ++i)
    for (std::size_t j = 0; j < te.size(); ++j) out(i, j) = te(i, j) - rte(i, j);
  return out;
}

/// Column d divided by H(X^F|X^P) of destination d; zero where that entropy
/// is below 1e-12.
inline LabeledMatrix nte_matrix(const LabeledMatrix& ete, const std::vector<std::vector<int>>& symbols) {
  require_kind(ete, MatrixKind::Ete);
  require(symbols.size() == ete.size(), ErrorCode::LabelMismatch, "one symbol series per matrix label required");
  LabeledMatrix out(ete.labels(), MatrixKind::Nte);
  for (std::size_t d = 0; d < ete.size(); ++d) {
    const double h = self_conditional_entropy(std::span<const int>(symbols[d]));
    for (std::size_t s = 0; s < ete.size(); ++s) out(s, d) = h < 1e-12 ? 0.0 : ete(s, d) / h;
  }
  return out;
}

inline LabeledMatrix nte_matrix(const LabeledMatrix& ete, const ReturnPanel& panel, const BinningSpec& spec) {
  require(ete.labels() == panel.labels(), ErrorCode::LabelMismatch, "ETE matrix and panel labels differ");
  return nte_matrix(ete, symbolize_panel(panel, spec));
}

struct NoiseFloor {
  double min_distance_mean = 0.0;
  double min_distance_std = 0.0;  // sample standard deviation over simulations
  std::vector<double> samples;
};

namespace detail {

inline double min_offdiagonal_distance(const std::vector<std::vector<double>>& columns, const Parallelism& par) {
  std::vector<std::string> labels(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) labels[c] = std::to_string(c);
  const auto corr = pearson_matrix(labels, columns, par);
  double best = -1.0;
  for (std::size_t i = 0; i < corr.size(); ++i)
    for (std::size_t j = i + 1; j < corr.size(); ++j) best = std::max(best, corr(i, j));
  return correlation_to_distance(best);
}

inline NoiseFloor summarize(std::vector<double> samples) {
  NoiseFloor nf;
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= n;
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  nf.min_distance_mean = mean;
  nf.min_distance_std = samples.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  nf.samples = std::move(samples);
  return nf;
}

}  // namespace detail

/// Minimum off-diagonal correlation distance of column-permuted copies of a
/// real panel, over plan.n_sims simulations.
inline NoiseFloor correlation_noise_floor(const std::vector<std::vector<double>>& columns, const SurrogatePlan& plan,
                                          const Parallelism& par = {}) {
  require(columns.size() >= 2 && columns[0].size() >= 30, ErrorCode::ShapeTooSmall,
          "noise floor needs at least 2 columns of 30 rows");
  require(plan.n_sims >= 1, ErrorCode::InvalidArgument, "at least one simulation is required");
  std::vector<double> samples(plan.n_sims);
  for (std::size_t sim = 0; sim < plan.n_sims; ++sim) {
    std::vector<std::vector<double>> shuffled(columns);
    parallel_for(shuffled.size(), par, [&](std::size_t c) {
      shuffle_in_place(std::span<double>(shuffled[c]), plan.seed(sim, c));
    });
    samples[sim] = detail::min_offdiagonal_distance(shuffled, par);
  }
  return detail::summarize(std::move(samples));
}

/// Same statistic for iid standard normal panels of the given shape.
inline NoiseFloor correlation_noise_floor(std::size_t rows, std::size_t cols, const SurrogatePlan& plan,
                                          const Parallelism& par = {}) {
  require(cols >= 2 && rows >= 30, ErrorCode::ShapeTooSmall, "noise floor needs at least 2 columns of 30 rows");
  require(plan.n_sims >= 1, ErrorCode::InvalidArgument, "at least one simulation is required");
  std::vector<double> samples(plan.n_sims);
  for (std::size_t sim = 0; sim < plan.n_sims; ++sim) {
    std::vector<std::vector<double>> panel(cols, std::vector<double>(rows));
    parallel_for(cols, par, [&](std::size_t c) {
      std::mt19937_64 rng(plan.seed(sim, c));
      std::normal_distribution<double> normal(0.0, 1.0);
      for (double& v : panel[c]) v = normal(rng);
    });
    samples[sim] = detail::min_offdiagonal_distance(panel, par);
  }
  return detail::summarize(std::move(samples));
}

}  // namespace teflow
