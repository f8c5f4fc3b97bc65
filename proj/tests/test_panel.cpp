#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "teflow/panel.hpp"

using namespace teflow;

namespace {

Date d(const char* s) { return Date::parse(s); }

PriceSeries series(const std::string& ticker, std::vector<const char*> dates, std::vector<double> closes) {
  PriceSeries s{ticker, {"US", "Tech", "Software"}, {}, std::move(closes)};
  for (const char* x : dates) s.dates.push_back(d(x));
  return s;
}

TradingCalendar calendar(std::vector<const char*> dates) {
  TradingCalendar c;
  for (const char* x : dates) c.dates.push_back(d(x));
  return c;
}

template <typename F>
ErrorCode code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no teflow::Error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Date, ParsesAndFormats) {
  EXPECT_EQ(d("2008-09-15").str(), "2008-09-15");
  EXPECT_LT(d("2008-09-15"), d("2008-09-16"));
  EXPECT_EQ(code_of([] { Date::parse("2008-02-30"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { Date::parse("2008-2-3"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { Date::parse("yesterday!"); }), ErrorCode::ParseError);
}

TEST(Align, ForwardFillsMissingCalendarDay) {
  const auto s = series("A", {"2010-01-01", "2010-01-02", "2010-01-04"}, {1.0, 2.0, 4.0});
  const auto out = align_to_calendar(s, calendar({"2010-01-01", "2010-01-02", "2010-01-03", "2010-01-04"}));
  EXPECT_EQ(out.closes, (std::vector<double>{1.0, 2.0, 2.0, 4.0}));
  EXPECT_EQ(out.dates.size(), 4u);
}

TEST(Align, IdentityWhenDatesMatch) {
  const auto s = series("A", {"2010-01-01", "2010-01-02", "2010-01-03"}, {1.0, 2.0, 3.0});
  const auto out = align_to_calendar(s, calendar({"2010-01-01", "2010-01-02", "2010-01-03"}));
  EXPECT_EQ(out.closes, s.closes);
  EXPECT_EQ(out.dates, s.dates);
}

TEST(Align, DropsDatesOffCalendar) {
  const auto s = series("A", {"2010-01-01", "2010-01-02", "2010-01-03"}, {1.0, 2.0, 3.0});
  const auto out = align_to_calendar(s, calendar({"2010-01-01", "2010-01-03"}));
  EXPECT_EQ(out.closes, (std::vector<double>{1.0, 3.0}));
}

TEST(Align, Errors) {
  const auto late = series("A", {"2010-01-02"}, {1.0});
  EXPECT_EQ(code_of([&] { align_to_calendar(late, calendar({"2010-01-01", "2010-01-02"})); }), ErrorCode::NoPriorClose);
  const PriceSeries empty{"E", {}, {}, {}};
  EXPECT_EQ(code_of([&] { align_to_calendar(empty, calendar({"2010-01-01"})); }), ErrorCode::EmptySeries);
  const auto bad = series("B", {"2010-01-01"}, {-1.0});
  EXPECT_EQ(code_of([&] { align_to_calendar(bad, calendar({"2010-01-01"})); }), ErrorCode::NonPositivePrice);
}

TEST(Align, IdempotentOnRandomSeries) {
  std::mt19937_64 rng(11);
  std::vector<const char*> all{"2010-01-01", "2010-01-02", "2010-01-03", "2010-01-04", "2010-01-05",
                               "2010-01-06", "2010-01-07", "2010-01-08", "2010-01-09", "2010-01-10"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<const char*> sd{all[0]};
    std::vector<double> closes{1.0};
    for (std::size_t i = 1; i < all.size(); ++i)
      if (rng() % 2) {
        sd.push_back(all[i]);
        closes.push_back(1.0 + static_cast<double>(rng() % 100));
      }
    std::vector<const char*> cd{all[0]};
    for (std::size_t i = 1; i < all.size(); ++i)
      if (rng() % 2) cd.push_back(all[i]);
    const auto cal = calendar(cd);
    const auto once = align_to_calendar(series("A", sd, closes), cal);
    const auto twice = align_to_calendar(once, cal);
    EXPECT_EQ(once.closes, twice.closes);
    EXPECT_EQ(once.dates, twice.dates);
  }
}

TEST(LogReturns, Examples) {
  EXPECT_DOUBLE_EQ(log_returns(std::vector<double>{1.0, std::exp(1.0)})[0], 1.0);
  for (double r : log_returns(std::vector<double>{5.0, 5.0, 5.0})) EXPECT_EQ(r, 0.0);
  EXPECT_NEAR(log_returns(std::vector<double>{100.0, 110.0})[0], 0.0953102, 5e-8);
  EXPECT_EQ(code_of([] { log_returns(std::vector<double>{1.0, 0.0}); }), ErrorCode::NonPositivePrice);
  EXPECT_EQ(code_of([] { log_returns(std::vector<double>{1.0}); }), ErrorCode::TooShort);
}

TEST(BuildPanel, ShapeAndOrder) {
  const auto cal = calendar({"2010-01-01", "2010-01-02", "2010-01-03", "2010-01-04", "2010-01-05"});
  const auto a = series("A", {"2010-01-01", "2010-01-02", "2010-01-03", "2010-01-04", "2010-01-05"},
                        {1, 2, 3, 4, 5});
  const auto b = series("B", {"2010-01-01", "2010-01-03", "2010-01-05"}, {10, 20, 40});
  const auto p = build_panel({b, a}, cal);
  EXPECT_EQ(p.rows(), 4u);
  EXPECT_EQ(p.cols(), 2u);
  EXPECT_EQ(p.labels(), (std::vector<std::string>{"B", "A"}));
  EXPECT_EQ(p.dates().front(), d("2010-01-02"));
  EXPECT_EQ(p.at(0, 0), 0.0);  // forward-filled day
  EXPECT_DOUBLE_EQ(p.at(1, 0), std::log(20.0) - std::log(10.0));
  EXPECT_EQ(p.column(1).meta.country, "US");
}

TEST(BuildPanel, Errors) {
  const auto cal = calendar({"2010-01-01", "2010-01-02"});
  const auto a = series("A", {"2010-01-01", "2010-01-02"}, {1, 2});
  EXPECT_EQ(code_of([&] { build_panel({a, a}, cal); }), ErrorCode::DuplicateLabel);
  EXPECT_EQ(code_of([&] { build_panel({a}, cal); }), ErrorCode::InvalidArgument);
  const auto late = series("LATE", {"2010-01-02"}, {1});
  try {
    build_panel({a, late}, cal);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoPriorClose);
    EXPECT_NE(std::string(e.what()).find("LATE"), std::string::npos);
  }
}

namespace {

ReturnPanel random_panel(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 0.02);
  std::vector<Date> dates;
  const std::chrono::sys_days first{std::chrono::year{2001} / 1 / 1};
  for (std::size_t r = 0; r < rows; ++r)
    dates.emplace_back(std::chrono::year_month_day(first + std::chrono::days(static_cast<int>(r))));
  std::vector<PanelColumn> columns;
  std::vector<std::vector<double>> values(cols, std::vector<double>(rows));
  for (std::size_t c = 0; c < cols; ++c) {
    columns.push_back({"S" + std::to_string(c), "S" + std::to_string(c), {}, 0});
    for (double& v : values[c]) v = n(rng);
  }
  return ReturnPanel(dates, columns, values);
}

}  // namespace

TEST(AugmentLagged, DoublesColumnsAndShifts) {
  const auto p = random_panel(10, 3, 1);
  const auto a = augment_lagged(p, 1);
  EXPECT_EQ(a.cols(), 6u);
  EXPECT_EQ(a.rows(), 9u);
  EXPECT_EQ(a.column(4).label, "S1*");
  EXPECT_EQ(a.column(4).lag, 1u);
  for (std::size_t r = 1; r < a.rows(); ++r) EXPECT_EQ(a.at(r, a.index_of("S1*")), a.at(r - 1, a.index_of("S1")));
  for (std::size_t r = 0; r < a.rows(); ++r) EXPECT_EQ(a.at(r, a.index_of("S2")), p.at(r + 1, 2));
  EXPECT_EQ(a.dates().front(), p.dates()[1]);
}

TEST(AugmentLagged, DeeperLagsAndErrors) {
  const auto p = random_panel(6, 2, 2);
  const auto a = augment_lagged(p, 2);
  EXPECT_EQ(a.cols(), 6u);
  EXPECT_EQ(a.column(5).label, "S1**");
  for (std::size_t r = 0; r < a.rows(); ++r) EXPECT_EQ(a.at(r, a.index_of("S0**")), p.at(r, 0));
  EXPECT_EQ(code_of([&] { augment_lagged(p, 0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { augment_lagged(p, 6); }), ErrorCode::LagTooLarge);
  EXPECT_EQ(code_of([&] { augment_lagged(a, 1); }), ErrorCode::InvalidArgument);
}

TEST(AugmentLagged, LagConsistencyOnRandomPanels) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = random_panel(20 + seed, 1 + seed % 4, seed);
    const std::size_t L = 1 + seed % 3;
    const auto a = augment_lagged(p, L);
    ASSERT_EQ(a.cols(), p.cols() * (L + 1));
    for (std::size_t c = 0; c < p.cols(); ++c)
      for (std::size_t lag = 0; lag <= L; ++lag) {
        const auto col = a.index_of(lagged_label(p.column(c).ticker, lag));
        for (std::size_t r = 0; r < a.rows(); ++r) {
          ASSERT_EQ(a.at(r, col), p.at(r + L - lag, c));
          ASSERT_TRUE(std::isfinite(a.at(r, col)));
        }
      }
  }
}

TEST(ReturnPanel, RejectsNonFiniteAndBadShape) {
  std::vector<Date> dates{d("2010-01-01"), d("2010-01-02")};
  std::vector<PanelColumn> cols{{"A", "A", {}, 0}};
  EXPECT_EQ(code_of([&] { ReturnPanel(dates, cols, {{0.0, NAN}}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { ReturnPanel(dates, cols, {{0.0}}); }), ErrorCode::ShapeMismatch);
}
