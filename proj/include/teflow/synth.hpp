#pragma once

// Synthetic return panels with planted couplings, used as ground truth for
// the estimators.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "teflow/error.hpp"
#include "teflow/panel.hpp"

namespace teflow {

/// H_b(p) in bits.
inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

struct PlantedEdge {
  std::string source;
  std::string target;
  double weight = 0.0;
  int lag = 1;
};

struct SynthPanel {
  std::string kind;
  std::vector<std::string> tickers;
  std::vector<std::vector<double>> returns;  // one series per ticker, equal lengths
  std::vector<PlantedEdge> edges;            // cross-series couplings only
  std::optional<double> analytic_te_bits;    // TE along the planted edge, when known
};

/// Binary symmetric channel: Y is iid fair bits, X[n+1] = Y[n] flipped with
/// probability epsilon. Bits are emitted as returns of -amplitude / +amplitude.
/// Series are named Y (source) and X (destination).
inline SynthPanel synth_bsc(double epsilon, std::size_t length, std::uint64_t seed, double amplitude = 0.05) {
  require(epsilon >= 0.0 && epsilon <= 0.5, ErrorCode::InvalidParams, "bsc epsilon must lie in [0, 0.5]");
  require(length >= 3, ErrorCode::InvalidParams, "series length must be at least 3");
  require(amplitude > 0.0, ErrorCode::InvalidParams, "amplitude must be positive");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution flip(epsilon);
  std::vector<int> y(length), x(length);
  for (auto& v : y) v = coin(rng) ? 1 : 0;
  x[0] = coin(rng) ? 1 : 0;
  for (std::size_t n = 0; n + 1 < length; ++n) x[n + 1] = y[n] ^ (flip(rng) ? 1 : 0);

  SynthPanel out;
  out.kind = "bsc";
  out.tickers = {"Y", "X"};
  out.returns.assign(2, std::vector<double>(length));
  for (std::size_t n = 0; n < length; ++n) {
    out.returns[0][n] = y[n] ? amplitude : -amplitude;
    out.returns[1][n] = x[n] ? amplitude : -amplitude;
  }
  out.edges.push_back({"Y", "X", 1.0 - 2.0 * epsilon, 1});
  out.analytic_te_bits = 1.0 - binary_entropy(epsilon);
  return out;
}

/// n_series independent AR(1) processes r[t] = phi r[t-1] + sigma e[t].
inline SynthPanel synth_ar1(double phi, std::size_t n_series, std::size_t length, std::uint64_t seed,
                            double sigma = 0.01) {
  require(std::abs(phi) < 1.0, ErrorCode::InvalidParams, "ar1 needs |phi| < 1");
  require(n_series >= 1 && length >= 3, ErrorCode::InvalidParams, "need at least one series of length 3");
  require(sigma > 0.0, ErrorCode::InvalidParams, "sigma must be positive");
  SynthPanel out;
  out.kind = "ar1";
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (std::size_t s = 0; s < n_series; ++s) {
    out.tickers.push_back("AR" + std::to_string(s + 1));
    std::vector<double> r(length);
    double prev = 0.0;
    for (int burn = 0; burn < 200; ++burn) prev = phi * prev + normal(rng);
    for (auto& v : r) prev = v = phi * prev + normal(rng);
    out.returns.push_back(std::move(r));
  }
  return out;
}

/// Gelfand estimate ||A^(2^m)||_F^(1 / 2^m) of the spectral radius.
inline double spectral_radius_estimate(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> p = a;
  double log_scale = 0.0;  // p holds A^(2^i) / exp(log_scale)
  for (int i = 0; i < 10; ++i) {
    std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < n; ++c) q[r][c] += p[r][k] * p[k][c];
    log_scale *= 2.0;
    double norm = 0.0;
    for (const auto& row : q)
      for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (auto& row : q)
      for (double& v : row) v /= norm;
    log_scale += std::log(norm);
    p = std::move(q);
  }
  return std::exp(log_scale / 1024.0);
}

/// VAR(1): r[t] = A r[t-1] + sigma e[t]; A[i][j] != 0 (i != j) plants an edge
/// from series j to series i. Series are named V1..Vn.
inline SynthPanel synth_var1(const std::vector<std::vector<double>>& coupling, std::size_t length, std::uint64_t seed,
                             double sigma = 0.01) {
  const std::size_t n = coupling.size();
  require(n >= 1, ErrorCode::InvalidParams, "coupling matrix is empty");
  for (const auto& row : coupling) require(row.size() == n, ErrorCode::InvalidParams, "coupling matrix must be square");
  require(length >= 3, ErrorCode::InvalidParams, "series length must be at least 3");
  require(sigma > 0.0, ErrorCode::InvalidParams, "sigma must be positive");
  require(spectral_radius_estimate(coupling) < 1.0, ErrorCode::InvalidParams,
          "coupling matrix must have spectral radius below 1");

  SynthPanel out;
  out.kind = "var1";
  for (std::size_t i = 0; i < n; ++i) out.tickers.push_back("V" + std::to_string(i + 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && coupling[i][j] != 0.0) out.edges.push_back({out.tickers[j], out.tickers[i], coupling[i][j], 1});

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<double> state(n, 0.0), next(n);
  out.returns.assign(n, std::vector<double>(length));
  for (std::size_t t = 0; t < length + 200; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = normal(rng);
      for (std::size_t j = 0; j < n; ++j) s += coupling[i][j] * state[j];
      next[i] = s;
    }
    state.swap(next);
    if (t >= 200)
      for (std::size_t i = 0; i < n; ++i) out.returns[i][t - 200] = state[i];
  }
  return out;
}

/// Consecutive calendar days starting at `first`, one more than the number of
/// returns, with prices compounding the returns from 100.
inline std::vector<PriceSeries> to_price_series(const SynthPanel& panel, TradingCalendar& cal,
                                                Date first = Date::parse("2000-01-03")) {
  const std::size_t T = panel.returns.empty() ? 0 : panel.returns.front().size();
  cal.dates.clear();
  const std::chrono::sys_days d0(first.ymd());
  for (std::size_t t = 0; t <= T; ++t)
    cal.dates.emplace_back(std::chrono::year_month_day(d0 + std::chrono::days(static_cast<int>(t))));

  std::vector<PriceSeries> out;
  for (std::size_t s = 0; s < panel.tickers.size(); ++s) {
    PriceSeries ps{panel.tickers[s], {"synthetic", panel.kind, ""}, cal.dates, {}};
    double price = 100.0;
    ps.closes.push_back(price);
    for (double r : panel.returns[s]) {
      price *= std::exp(r);
      ps.closes.push_back(price);
    }
    out.push_back(std::move(ps));
  }
  return out;
}

}  // namespace teflow
