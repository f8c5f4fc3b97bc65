#pragma once

// Price ingestion, calendar alignment, log-returns and lag-augmented panels.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdio>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "teflow/error.hpp"

namespace teflow {

/// Calendar date. Dates are opaque ordered keys: there is no timezone or
/// weekend logic anywhere in the library.
class Date {
 public:
  Date() = default;
  explicit Date(std::chrono::year_month_day ymd) : ymd_(ymd) {}

  /// Parses YYYY-MM-DD.
  static Date parse(const std::string& text) {
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3 || text.size() != 10)
      fail(ErrorCode::ParseError, "not an ISO-8601 date: '" + text + "'");
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) fail(ErrorCode::ParseError, "invalid calendar date: '" + text + "'");
    return Date(ymd);
  }

  std::chrono::year_month_day ymd() const { return ymd_; }

  std::string str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd_.year()),
                  static_cast<unsigned>(ymd_.month()), static_cast<unsigned>(ymd_.day()));
    return buf;
  }

  auto operator<=>(const Date& other) const {
    return std::chrono::sys_days(ymd_) <=> std::chrono::sys_days(other.ymd_);
  }
  bool operator==(const Date& other) const = default;

 private:
  std::chrono::year_month_day ymd_{std::chrono::year{1970}, std::chrono::month{1}, std::chrono::day{1}};
};

struct AssetMeta {
  std::string country;
  std::string industry;
  std::string sub_industry;

  bool operator==(const AssetMeta&) const = default;
};

struct PriceSeries {
  std::string ticker;
  AssetMeta meta;
  std::vector<Date> dates;
  std::vector<double> closes;

  /// Throws unless the series is non-empty, dates strictly increase and every
  /// close is positive.
  void validate() const {
    require(!dates.empty(), ErrorCode::EmptySeries, "series '" + ticker + "' has no observations");
    require(dates.size() == closes.size(), ErrorCode::LengthMismatch,
            "series '" + ticker + "': dates and closes differ in length");
    for (std::size_t i = 1; i < dates.size(); ++i)
      require(dates[i - 1] < dates[i], ErrorCode::InvalidArgument,
              "series '" + ticker + "': dates not strictly increasing at " + dates[i].str());
    for (std::size_t i = 0; i < closes.size(); ++i)
      require(std::isfinite(closes[i]) && closes[i] > 0.0, ErrorCode::NonPositivePrice,
              "series '" + ticker + "': non-positive close on " + dates[i].str());
  }
};

struct TradingCalendar {
  std::vector<Date> dates;

  void validate() const {
    require(!dates.empty(), ErrorCode::EmptySeries, "trading calendar is empty");
    for (std::size_t i = 1; i < dates.size(); ++i)
      require(dates[i - 1] < dates[i], ErrorCode::InvalidArgument,
              "calendar dates not strictly increasing at " + dates[i].str());
  }
};

/// Label of the lag-L copy of a ticker: one trailing '*' per day of lag.
inline std::string lagged_label(const std::string& ticker, std::size_t lag) {
  return ticker + std::string(lag, '*');
}

struct PanelColumn {
  std::string label;
  std::string ticker;
  AssetMeta meta;
  std::size_t lag = 0;
};

/// T x N matrix of log-returns, stored column-major so each series is
/// contiguous.
class ReturnPanel {
 public:
  ReturnPanel() = default;

  ReturnPanel(std::vector<Date> dates, std::vector<PanelColumn> columns, std::vector<std::vector<double>> values)
      : dates_(std::move(dates)), columns_(std::move(columns)), values_(std::move(values)) {
    require(columns_.size() == values_.size(), ErrorCode::ShapeMismatch, "column metadata does not match values");
    std::unordered_set<std::string> seen;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      require(seen.insert(columns_[c].label).second, ErrorCode::DuplicateLabel,
              "duplicate column label '" + columns_[c].label + "'");
      require(values_[c].size() == dates_.size(), ErrorCode::ShapeMismatch,
              "column '" + columns_[c].label + "' has " + std::to_string(values_[c].size()) + " rows, expected " +
                  std::to_string(dates_.size()));
      for (double v : values_[c])
        require(std::isfinite(v), ErrorCode::InvalidArgument, "non-finite value in column '" + columns_[c].label + "'");
    }
  }

  std::size_t rows() const { return dates_.size(); }
  std::size_t cols() const { return columns_.size(); }

  const std::vector<Date>& dates() const { return dates_; }
  const std::vector<PanelColumn>& columns() const { return columns_; }
  const PanelColumn& column(std::size_t c) const { return columns_.at(c); }
  const std::vector<double>& values(std::size_t c) const { return values_.at(c); }
  const std::vector<std::vector<double>>& all_values() const { return values_; }
  double at(std::size_t row, std::size_t col) const { return values_[col][row]; }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) out.push_back(c.label);
    return out;
  }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t c = 0; c < columns_.size(); ++c)
      if (columns_[c].label == label) return c;
    fail(ErrorCode::UnknownLabel, "no column labelled '" + label + "'");
  }

  bool contains(const std::string& label) const {
    return std::any_of(columns_.begin(), columns_.end(), [&](const auto& c) { return c.label == label; });
  }

  /// Same rows and metadata with replaced column values.
  ReturnPanel with_values(std::vector<std::vector<double>> values) const {
    return ReturnPanel(dates_, columns_, std::move(values));
  }

 private:
  std::vector<Date> dates_;
  std::vector<PanelColumn> columns_;
  std::vector<std::vector<double>> values_;
};

/// Resamples a series onto the benchmark calendar: closes on non-calendar
/// days are dropped, calendar days without a close repeat the previous close.
inline PriceSeries align_to_calendar(const PriceSeries& series, const TradingCalendar& cal) {
  series.validate();
  cal.validate();

  PriceSeries out{series.ticker, series.meta, cal.dates, {}};
  out.closes.reserve(cal.dates.size());
  std::size_t src = 0;
  bool have_prior = false;
  double last = 0.0;
  for (const Date& day : cal.dates) {
    while (src < series.dates.size() && series.dates[src] <= day) {
      last = series.closes[src];
      have_prior = true;
      ++src;
    }
    if (!have_prior)
      fail(ErrorCode::NoPriorClose,
           "series '" + series.ticker + "' has no close on or before calendar date " + day.str());
    out.closes.push_back(last);
  }
  return out;
}

inline std::vector<double> log_returns(const std::vector<double>& closes) {
  require(closes.size() >= 2, ErrorCode::TooShort, "need at least two closes for a return");
  for (double c : closes) require(std::isfinite(c) && c > 0.0, ErrorCode::NonPositivePrice, "non-positive close");
  std::vector<double> out(closes.size() - 1);
  for (std::size_t t = 0; t + 1 < closes.size(); ++t) out[t] = std::log(closes[t + 1]) - std::log(closes[t]);
  return out;
}

inline std::vector<double> log_returns(const PriceSeries& series) {
  try {
    return log_returns(series.closes);
  } catch (const Error& e) {
    throw Error(e.code(), "series '" + series.ticker + "': " + e.what());
  }
}

/// One lag-0 column per series in manifest order. Row t holds the return from
/// calendar day t to day t+1 and is dated by day t+1.
inline ReturnPanel build_panel(const std::vector<PriceSeries>& series_set, const TradingCalendar& cal) {
  require(series_set.size() >= 2, ErrorCode::InvalidArgument, "a panel needs at least two series");
  require(cal.dates.size() >= 2, ErrorCode::TooShort, "calendar needs at least two dates");

  std::unordered_set<std::string> tickers;
  for (const auto& s : series_set)
    require(tickers.insert(s.ticker).second, ErrorCode::DuplicateLabel, "duplicate ticker '" + s.ticker + "'");

  std::vector<PanelColumn> columns;
  std::vector<std::vector<double>> values;
  for (const auto& s : series_set) {
    PriceSeries aligned;
    try {
      aligned = align_to_calendar(s, cal);
    } catch (const Error& e) {
      throw Error(e.code(), "ticker '" + s.ticker + "': " + e.what());
    }
    values.push_back(log_returns(aligned));
    columns.push_back({s.ticker, s.ticker, s.meta, 0});
  }
  return ReturnPanel(std::vector<Date>(cal.dates.begin() + 1, cal.dates.end()), std::move(columns), std::move(values));
}

/// Appends lag-1..max_lag copies of every lag-0 column. The first max_lag rows
/// are dropped so the result stays rectangular: output row r corresponds to
/// input row r + max_lag, and the lag-L column at row r holds input row
/// r + max_lag - L.
inline ReturnPanel augment_lagged(const ReturnPanel& panel, std::size_t max_lag) {
  require(max_lag >= 1, ErrorCode::InvalidArgument, "max_lag must be at least 1");
  require(panel.rows() > max_lag, ErrorCode::LagTooLarge,
          "max_lag " + std::to_string(max_lag) + " leaves no rows in a panel of " + std::to_string(panel.rows()));
  for (const auto& c : panel.columns())
    require(c.lag == 0, ErrorCode::InvalidArgument, "panel is already lag-augmented ('" + c.label + "')");

  const std::size_t rows = panel.rows() - max_lag;
  std::vector<PanelColumn> columns;
  std::vector<std::vector<double>> values;
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    for (std::size_t c = 0; c < panel.cols(); ++c) {
      const auto& base = panel.column(c);
      columns.push_back({lagged_label(base.ticker, lag), base.ticker, base.meta, lag});
      const auto& src = panel.values(c);
      const auto first = src.begin() + static_cast<std::ptrdiff_t>(max_lag - lag);
      values.emplace_back(first, first + static_cast<std::ptrdiff_t>(rows));
    }
  }
  std::vector<Date> dates(panel.dates().begin() + static_cast<std::ptrdiff_t>(max_lag), panel.dates().end());
  return ReturnPanel(std::move(dates), std::move(columns), std::move(values));
}

}  // namespace teflow
