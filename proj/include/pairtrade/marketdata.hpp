#pragma once

// Daily close-price series: CSV ingestion, calendar alignment, windowing and
// simple returns.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pairtrade/date.hpp"
#include "pairtrade/error.hpp"

namespace pairtrade {

class PriceSeries {
 public:
  PriceSeries() = default;

  /// Validates the series invariants; input must already be date-ordered.
  PriceSeries(std::string ticker, std::vector<Date> dates, std::vector<double> closes)
      : ticker_(std::move(ticker)), dates_(std::move(dates)), closes_(std::move(closes)) {
    if (dates_.size() != closes_.size()) {
      throw Error(ErrorCode::LengthMismatch, ticker_ + ": dates and closes differ in length");
    }
    if (dates_.empty()) throw Error(ErrorCode::EmptySeries, ticker_ + ": no observations");
    for (std::size_t i = 0; i < closes_.size(); ++i) {
      if (!std::isfinite(closes_[i]) || closes_[i] <= 0.0) {
        throw Error(ErrorCode::NonPositivePrice,
                    ticker_ + ": close on " + dates_[i].iso() + " is not a positive price");
      }
      if (i > 0 && !(dates_[i - 1] < dates_[i])) {
        throw Error(dates_[i - 1] == dates_[i] ? ErrorCode::DuplicateDate
                                               : ErrorCode::InvariantViolation,
                    ticker_ + ": dates not strictly increasing at " + dates_[i].iso());
      }
    }
  }

  [[nodiscard]] const std::string& ticker() const noexcept { return ticker_; }
  [[nodiscard]] std::span<const Date> dates() const noexcept { return dates_; }
  [[nodiscard]] std::span<const double> closes() const noexcept { return closes_; }
  [[nodiscard]] std::size_t size() const noexcept { return closes_.size(); }

  [[nodiscard]] double mean_close() const noexcept {
    double sum = 0.0;
    for (double c : closes_) sum += c;
    return sum / static_cast<double>(closes_.size());
  }

  friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

 private:
  std::string ticker_;
  std::vector<Date> dates_;
  std::vector<double> closes_;
};

/// Simple returns r_t = p_t / p_{t-1} - 1, dated at t.
struct ReturnSeries {
  std::string ticker;
  std::vector<Date> dates;
  std::vector<double> values;
};

/// Inner-join of several price series on their common dates.
class AlignedPanel {
 public:
  AlignedPanel() = default;
  AlignedPanel(std::vector<std::string> tickers, std::vector<Date> dates,
               std::vector<std::vector<double>> columns)
      : tickers_(std::move(tickers)), dates_(std::move(dates)), columns_(std::move(columns)) {
    if (tickers_.size() != columns_.size()) {
      throw Error(ErrorCode::LengthMismatch, "panel: ticker count differs from column count");
    }
    for (const auto& col : columns_) {
      if (col.size() != dates_.size()) {
        throw Error(ErrorCode::LengthMismatch, "panel: column length differs from calendar");
      }
    }
    for (std::size_t i = 1; i < dates_.size(); ++i) {
      if (!(dates_[i - 1] < dates_[i])) {
        throw Error(ErrorCode::InvariantViolation, "panel: dates not strictly increasing");
      }
    }
  }

  [[nodiscard]] std::span<const std::string> tickers() const noexcept { return tickers_; }
  [[nodiscard]] std::span<const Date> dates() const noexcept { return dates_; }
  [[nodiscard]] std::span<const double> column(std::size_t i) const { return columns_.at(i); }
  [[nodiscard]] double at(std::size_t date_index, std::size_t ticker_index) const {
    return columns_.at(ticker_index).at(date_index);
  }
  [[nodiscard]] std::size_t num_tickers() const noexcept { return tickers_.size(); }
  [[nodiscard]] std::size_t num_dates() const noexcept { return dates_.size(); }

  [[nodiscard]] std::size_t index_of(std::string_view ticker) const {
    auto it = std::find(tickers_.begin(), tickers_.end(), ticker);
    if (it == tickers_.end()) {
      throw Error(ErrorCode::Config, "ticker '" + std::string(ticker) + "' not in panel");
    }
    return static_cast<std::size_t>(it - tickers_.begin());
  }

  [[nodiscard]] PriceSeries series(std::size_t i) const {
    return PriceSeries(tickers_.at(i), dates_, columns_.at(i));
  }

  friend bool operator==(const AlignedPanel&, const AlignedPanel&) = default;

 private:
  std::vector<std::string> tickers_;
  std::vector<Date> dates_;
  std::vector<std::vector<double>> columns_;
};

struct CsvOptions {
  /// First column present in the header wins.
  std::vector<std::string> close_columns{"Close", "Adj Close"};
};

struct LoadStats {
  std::size_t rows_read = 0;
  /// Rows whose close was blank or NaN (vendor holiday gaps).
  std::size_t rows_dropped = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == ',' && !quoted) {
      fields.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  fields.push_back(trim(line.substr(start)));
  return fields;
}

inline bool is_missing_value(std::string_view s) noexcept {
  if (s.empty()) return true;
  std::string lower;
  for (char c : s) lower += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  return lower == "nan" || lower == "null" || lower == "na" || lower == "n/a";
}

inline bool parse_double(std::string_view s, double& out) noexcept {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace detail

/// Parses one ticker's CSV export from an in-memory buffer.
/// `source` only labels diagnostics.
inline PriceSeries parse_price_csv(std::string_view text, const std::string& ticker,
                                   const CsvOptions& options = {}, LoadStats* stats = nullptr,
                                   const std::string& source = "<memory>") {
  if (ticker.empty()) throw Error(ErrorCode::Config, source + ": empty ticker");
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  std::size_t first = 0;
  while (first < lines.size() && detail::trim(lines[first]).empty()) ++first;
  if (first == lines.size()) throw Error(ErrorCode::MissingColumn, source + ": no header row");

  auto header = detail::split_csv_line(lines[first]);
  if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].remove_prefix(3);
  std::ptrdiff_t date_col = -1;
  std::ptrdiff_t close_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "Date") date_col = static_cast<std::ptrdiff_t>(i);
  }
  for (const auto& name : options.close_columns) {
    for (std::size_t i = 0; i < header.size() && close_col < 0; ++i) {
      if (header[i] == name) close_col = static_cast<std::ptrdiff_t>(i);
    }
    if (close_col >= 0) break;
  }
  if (date_col < 0) throw Error(ErrorCode::MissingColumn, source + ": no 'Date' column");
  if (close_col < 0) throw Error(ErrorCode::MissingColumn, source + ": no close column");

  std::vector<std::pair<Date, double>> rows;
  LoadStats local;
  for (std::size_t li = first + 1; li < lines.size(); ++li) {
    if (detail::trim(lines[li]).empty()) continue;
    const auto fields = detail::split_csv_line(lines[li]);
    const std::string where = source + " line " + std::to_string(li + 1);
    ++local.rows_read;
    if (static_cast<std::ptrdiff_t>(fields.size()) <= std::max(date_col, close_col)) {
      throw Error(ErrorCode::MalformedRow, where + ": too few fields");
    }
    const auto date = Date::try_parse(fields[static_cast<std::size_t>(date_col)]);
    if (!date) throw Error(ErrorCode::MalformedRow, where + ": unparseable date");
    const auto close_text = fields[static_cast<std::size_t>(close_col)];
    if (detail::is_missing_value(close_text)) {
      ++local.rows_dropped;
      continue;
    }
    double close = 0.0;
    if (!detail::parse_double(close_text, close) || !std::isfinite(close)) {
      throw Error(ErrorCode::MalformedRow, where + ": unparseable close '" + std::string(close_text) + "'");
    }
    if (close <= 0.0) {
      throw Error(ErrorCode::NonPositivePrice,
                  where + " (" + date->iso() + "): close " + std::string(close_text) + " <= 0");
    }
    rows.emplace_back(*date, close);
  }
  if (stats) *stats = local;
  if (rows.empty()) throw Error(ErrorCode::EmptySeries, source + ": no valid rows");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Date> dates;
  std::vector<double> closes;
  dates.reserve(rows.size());
  closes.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].first == rows[i - 1].first) {
      throw Error(ErrorCode::DuplicateDate, source + ": date " + rows[i].first.iso() + " appears twice");
    }
    dates.push_back(rows[i].first);
    closes.push_back(rows[i].second);
  }
  return PriceSeries(ticker, std::move(dates), std::move(closes));
}

inline PriceSeries load_csv(const std::string& path, const std::string& ticker,
                            const CsvOptions& options = {}, LoadStats* stats = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path + "' for " + ticker);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_price_csv(text, ticker, options, stats, path);
}

/// Inner join on dates; column order follows the input order.
inline AlignedPanel align_panel(std::span<const PriceSeries> series) {
  if (series.size() < 2) throw Error(ErrorCode::Config, "align_panel needs at least two series");
  std::set<std::string_view> seen;
  for (const auto& s : series) {
    if (!seen.insert(s.ticker()).second) {
      throw Error(ErrorCode::DuplicateTicker, "ticker '" + s.ticker() + "' given twice");
    }
  }
  std::vector<Date> common(series[0].dates().begin(), series[0].dates().end());
  for (std::size_t k = 1; k < series.size() && !common.empty(); ++k) {
    std::vector<Date> next;
    std::set_intersection(common.begin(), common.end(), series[k].dates().begin(),
                          series[k].dates().end(), std::back_inserter(next));
    common = std::move(next);
  }
  if (common.empty()) throw Error(ErrorCode::EmptyIntersection, "series share no common dates");

  std::vector<std::string> tickers;
  std::vector<std::vector<double>> columns;
  for (const auto& s : series) {
    tickers.push_back(s.ticker());
    std::vector<double> col;
    col.reserve(common.size());
    const auto dates = s.dates();
    const auto closes = s.closes();
    std::size_t j = 0;
    for (const Date& d : common) {
      while (dates[j] < d) ++j;
      col.push_back(closes[j]);
    }
    columns.push_back(std::move(col));
  }
  return AlignedPanel(std::move(tickers), std::move(common), std::move(columns));
}

inline AlignedPanel align_panel(std::initializer_list<PriceSeries> series) {
  return align_panel(std::span<const PriceSeries>(series.begin(), series.size()));
}

inline ReturnSeries pct_change(const PriceSeries& p) {
  if (p.size() < 2) throw Error(ErrorCode::SeriesTooShort, p.ticker() + ": need at least 2 prices");
  ReturnSeries r;
  r.ticker = p.ticker();
  const auto closes = p.closes();
  for (std::size_t t = 1; t < closes.size(); ++t) {
    r.dates.push_back(p.dates()[t]);
    r.values.push_back(closes[t] / closes[t - 1] - 1.0);
  }
  return r;
}

namespace detail {

inline std::pair<std::size_t, std::size_t> window_bounds(std::span<const Date> dates, Window w) {
  if (w.end < w.start) throw Error(ErrorCode::EmptyWindow, "window start after end");
  const auto lo = std::lower_bound(dates.begin(), dates.end(), w.start);
  const auto hi = std::upper_bound(dates.begin(), dates.end(), w.end);
  if (lo >= hi) {
    throw Error(ErrorCode::EmptyWindow,
                "no observations in [" + w.start.iso() + ", " + w.end.iso() + "]");
  }
  return {static_cast<std::size_t>(lo - dates.begin()), static_cast<std::size_t>(hi - dates.begin())};
}

}  // namespace detail

inline PriceSeries slice_window(const PriceSeries& s, Window w) {
  const auto [lo, hi] = detail::window_bounds(s.dates(), w);
  return PriceSeries(s.ticker(), {s.dates().begin() + lo, s.dates().begin() + hi},
                     {s.closes().begin() + lo, s.closes().begin() + hi});
}

inline AlignedPanel slice_window(const AlignedPanel& p, Window w) {
  const auto [lo, hi] = detail::window_bounds(p.dates(), w);
  std::vector<std::vector<double>> cols;
  for (std::size_t i = 0; i < p.num_tickers(); ++i) {
    const auto col = p.column(i);
    cols.emplace_back(col.begin() + lo, col.begin() + hi);
  }
  return AlignedPanel({p.tickers().begin(), p.tickers().end()},
                      {p.dates().begin() + lo, p.dates().begin() + hi}, std::move(cols));
}

}  // namespace pairtrade
