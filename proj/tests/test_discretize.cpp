#include <algorithm>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "teflow/discretize.hpp"
#include "teflow/surrogate.hpp"

using namespace teflow;

namespace {

SymbolSeries syms(std::vector<int> s, int n_bins) {
  BinningSpec spec;
  spec.lo_index = 0;
  spec.hi_index = n_bins;
  return {std::move(s), spec};
}

}  // namespace

TEST(FitBins, RoundsOutwardToWidthMultiples) {
  const std::vector<std::vector<double>> cols{{-1.4949, 0.1}, {0.7049, -0.3}};
  const auto spec = fit_bins(std::span<const std::vector<double>>(cols), 0.1, BinMode::Global);
  EXPECT_NEAR(spec.lo(), -1.5, 1e-12);
  EXPECT_NEAR(spec.hi(), 0.8, 1e-12);
  EXPECT_EQ(spec.n_bins(), 23);
  EXPECT_GE(spec.lo() + spec.n_bins() * spec.width, spec.hi() - 1e-12);
}

TEST(FitBins, DegenerateRangeWidenedToOneBin) {
  const auto spec = fit_bins(std::vector<double>{0.0, 0.0}, 0.1);
  EXPECT_EQ(spec.lo(), 0.0);
  EXPECT_NEAR(spec.hi(), 0.1, 1e-15);
  EXPECT_EQ(spec.n_bins(), 1);
}

TEST(FitBins, SymmetricRange) {
  const auto spec = fit_bins(std::vector<double>{-0.25, 0.0, 0.25}, 0.1);
  EXPECT_NEAR(spec.lo(), -0.3, 1e-12);
  EXPECT_NEAR(spec.hi(), 0.3, 1e-12);
  EXPECT_EQ(spec.n_bins(), 6);
}

TEST(FitBins, ValuesOnEdgesStayPut) {
  const auto spec = fit_bins(std::vector<double>{-0.2, 0.3}, 0.1);
  EXPECT_EQ(spec.n_bins(), 5);
  EXPECT_NEAR(spec.lo(), -0.2, 1e-12);
}

TEST(FitBins, Errors) {
  EXPECT_THROW(
      {
        try {
          fit_bins(std::vector<double>{1.0}, 0.0);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::ZeroWidth);
          throw;
        }
      },
      Error);
  try {
    fit_bins(std::vector<double>{}, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyData);
  }
}

TEST(FitBins, PerSeriesScansOneColumnGlobalScansAll) {
  const std::vector<std::vector<double>> cols{{-0.05, 0.05}, {-0.45, 0.35}};
  const auto global = fit_bins(std::span<const std::vector<double>>(cols), 0.1, BinMode::Global);
  const auto first = fit_bins(cols[0], 0.1);
  EXPECT_EQ(global.n_bins(), 9);  // [-0.5, 0.4]
  EXPECT_EQ(first.n_bins(), 2);
  EXPECT_EQ(first.mode, BinMode::PerSeries);
}

TEST(Symbolize, Edges) {
  const auto spec = fit_bins(std::vector<double>{-1.5, 0.8}, 0.1);
  EXPECT_EQ(symbol_of(spec.lo(), spec), 1);
  EXPECT_EQ(symbol_of(spec.hi(), spec), spec.n_bins());
  EXPECT_EQ(symbol_of(0.0153, spec), 16);
  EXPECT_EQ(symbol_of(-1.4, spec), 2);  // left-closed
  try {
    symbol_of(0.95, spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
  }
}

TEST(Symbolize, MonotoneAndInRange) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 0.3);
  std::vector<double> x(2000);
  for (double& v : x) v = n(rng);
  const auto spec = fit_bins(x, 0.1);
  auto sorted = x;
  std::sort(sorted.begin(), sorted.end());
  const auto s = symbolize(sorted, spec);
  for (std::size_t i = 0; i < s.size(); ++i) {
    ASSERT_GE(s.symbols[i], 1);
    ASSERT_LE(s.symbols[i], spec.n_bins());
    if (i) {
      ASSERT_LE(s.symbols[i - 1], s.symbols[i]);
    }
  }
}

TEST(Symbolize, ShuffleCommutesWithSymbolization) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 0.2);
  std::vector<double> x(500);
  for (double& v : x) v = n(rng);
  const auto spec = fit_bins(x, 0.05);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = symbolize(shuffle_series(x, seed), spec).symbols;
    const auto b = shuffle_series(symbolize(x, spec).symbols, seed);
    EXPECT_EQ(a, b);
  }
}

TEST(JointCounts, ConstantSeriesSingleCell) {
  const auto s = syms({1, 1, 1, 1}, 1);
  const auto jc = joint_counts(s, s, 1, 1);
  ASSERT_EQ(jc.table().size(), 1u);
  EXPECT_EQ(jc.count({1, {1}, {1}}), 3u);
  EXPECT_EQ(jc.total(), 3u);
}

TEST(JointCounts, TenRowIllustration) {
  // X column of the worked example: X_n is rows 0..9, X_{n+1} is rows 1..10.
  const auto x = syms({16, 15, 16, 15, 16, 15, 16, 15, 16, 16, 16}, 24);
  const auto jc = joint_counts(x, x, 1, 1);
  EXPECT_EQ(jc.total(), 10u);
  const auto pairs = jc.marginal({0, 1});
  auto at = [&](int a, int b) {
    auto it = pairs.find({a, b});
    return it == pairs.end() ? 0u : it->second;
  };
  EXPECT_EQ(at(15, 15), 0u);
  EXPECT_EQ(at(15, 16), 4u);
  EXPECT_EQ(at(16, 15), 4u);
  EXPECT_EQ(at(16, 16), 2u);
  EXPECT_EQ(jc.marginal({1}).at({15}), 4u);
}

TEST(JointCounts, EncodeDecodeRoundTrip) {
  JointCounts jc(7, 3, 2);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    JointCounts::State s;
    s.next = 1 + static_cast<int>(rng() % 7);
    for (int j = 0; j < 3; ++j) s.dest_past.push_back(1 + static_cast<int>(rng() % 7));
    for (int j = 0; j < 2; ++j) s.source_past.push_back(1 + static_cast<int>(rng() % 7));
    EXPECT_EQ(jc.decode(jc.encode(s)), s);
  }
}

TEST(JointCounts, MarginalConsistencyOnRandomPairs) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int B = 2 + trial % 4;
    const int k = 1 + trial % 3;
    const int l = 1 + (trial / 3) % 3;
    std::vector<int> x(1000), y(1000);
    for (auto& v : x) v = 1 + static_cast<int>(rng() % B);
    for (auto& v : y) v = 1 + static_cast<int>(rng() % B);
    const auto jc = joint_counts(syms(x, B), syms(y, B), k, l);
    const std::size_t T = x.size();
    const std::size_t start = static_cast<std::size_t>(std::max(k, l) - 1);
    EXPECT_EQ(jc.total(), T - static_cast<std::size_t>(std::max(k, l)));

    // Marginal over the source history equals a direct recount of the
    // destination's (next, past) tuples.
    std::map<std::vector<int>, std::uint64_t> direct;
    for (std::size_t n = start; n + 1 < T; ++n) {
      std::vector<int> key{x[n + 1]};
      for (int i = 0; i < k; ++i) key.push_back(x[n - i]);
      direct[key] += 1;
    }
    std::vector<std::size_t> keep;
    for (int i = 0; i <= k; ++i) keep.push_back(static_cast<std::size_t>(i));
    EXPECT_EQ(jc.marginal(keep), direct);

    // The one-coordinate marginal still adds up to the total.
    std::uint64_t sum = 0;
    for (const auto& [key, c] : jc.marginal({0})) sum += c;
    EXPECT_EQ(sum, jc.total());
  }
}

TEST(JointCounts, Errors) {
  try {
    joint_counts(syms({1, 2, 1}, 2), syms({1, 2}, 2), 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
  EXPECT_THROW(JointCounts(4, 0, 1), Error);
  EXPECT_THROW(JointCounts(4, 5, 1), Error);
}
