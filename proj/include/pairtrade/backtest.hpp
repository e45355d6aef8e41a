#pragma once

// Two-leg cash/holdings ledger, pair summaries and sector tables.
//
// Each leg starts with `capital_per_leg` in cash and a share count fixed from
// the first close of the window. A position delta d on day t trades
// d * shares at that day's close; holdings are marked to market daily at
// signal * shares * close. No costs, no forced liquidation at the end.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "pairtrade/error.hpp"
#include "pairtrade/money.hpp"
#include "pairtrade/signalgen.hpp"

namespace pairtrade {

struct BacktestConfig {
  Money capital_per_leg = Money::units(100'000);
  Window test_window{Date(2021, 1, 1), Date(2021, 12, 31)};
};

inline std::int64_t size_shares(Money capital_per_leg, double first_close) {
  if (!(first_close > 0.0)) throw Error(ErrorCode::NonPositivePrice, "first close must be positive");
  const Money price = Money::from_double(first_close);
  if (price.micros() <= 0) throw Error(ErrorCode::NonPositivePrice, "first close rounds to zero");
  const std::int64_t shares = capital_per_leg.micros() / price.micros();
  if (shares <= 0) {
    throw Error(ErrorCode::PriceExceedsCapital,
                "price " + price.str() + " exceeds capital " + capital_per_leg.str());
  }
  return shares;
}

struct LedgerRow {
  Date date;
  Money cash1;
  Money cash2;
  Money holdings1;
  Money holdings2;
  Money total;

  friend bool operator==(const LedgerRow&, const LedgerRow&) = default;
};

struct BacktestLedger {
  std::string asset1;
  std::string asset2;
  Money capital_per_leg;
  std::int64_t shares1 = 0;
  std::int64_t shares2 = 0;
  std::vector<LedgerRow> rows;
  std::vector<Trigger> triggers;
};

/// Replays `frame` (already restricted to the test window) day by day.
inline BacktestLedger run_ledger(const TradingFrame& frame, const BacktestConfig& config) {
  if (frame.rows.empty()) throw Error(ErrorCode::EmptyFrame, "trading frame has no rows");
  if (config.capital_per_leg.micros() <= 0) throw Error(ErrorCode::Config, "capital per leg must be positive");
  validate_frame(frame);

  BacktestLedger ledger;
  ledger.asset1 = frame.asset1;
  ledger.asset2 = frame.asset2;
  ledger.capital_per_leg = config.capital_per_leg;
  ledger.shares1 = size_shares(config.capital_per_leg, frame.rows.front().asset1);
  ledger.shares2 = size_shares(config.capital_per_leg, frame.rows.front().asset2);
  ledger.triggers = extract_triggers(frame);

  Money cash1 = config.capital_per_leg;
  Money cash2 = config.capital_per_leg;
  ledger.rows.reserve(frame.rows.size());
  for (const auto& r : frame.rows) {
    const Money lot1 = Money::from_double(r.asset1).times(ledger.shares1);
    const Money lot2 = Money::from_double(r.asset2).times(ledger.shares2);
    cash1 -= lot1.times(r.positions1);
    cash2 -= lot2.times(r.positions2);
    const Money h1 = lot1.times(r.signals1);
    const Money h2 = lot2.times(r.signals2);
    ledger.rows.push_back({r.date, cash1, cash2, h1, h2, cash1 + cash2 + h1 + h2});
  }
  return ledger;
}

/// profit / initial * 100 in hundredths of a percent, rounded half away from zero.
inline std::int64_t return_hundredths(Money profit, Money initial) {
  if (initial.micros() <= 0) throw Error(ErrorCode::Config, "initial investment must be positive");
  const __int128 num = static_cast<__int128>(profit.micros()) * 10'000;
  const __int128 den = initial.micros();
  __int128 q = num / den;
  const __int128 rem = num % den;
  const __int128 twice = rem < 0 ? -2 * rem : 2 * rem;
  if (twice >= den) q += num < 0 ? -1 : 1;
  return static_cast<std::int64_t>(q);
}

inline std::string format_hundredths(std::int64_t h) {
  const bool neg = h < 0;
  const std::int64_t mag = neg ? -h : h;
  std::string frac = std::to_string(mag % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return (neg ? "-" : "") + std::to_string(mag / 100) + "." + frac;
}

struct PairSummary {
  std::string sector;
  std::string asset1;
  std::string asset2;
  Money initial_investment;
  Money profit;
  std::int64_t annual_return_hundredths = 0;

  [[nodiscard]] std::string pair_name() const { return asset1 + " - " + asset2; }
  [[nodiscard]] double annual_return() const { return static_cast<double>(annual_return_hundredths) / 100.0; }

  friend bool operator==(const PairSummary&, const PairSummary&) = default;
};

inline PairSummary summarize_profit(Money profit, Money capital_per_leg, std::string asset1 = {},
                                    std::string asset2 = {}, std::string sector = {}) {
  PairSummary s;
  s.sector = std::move(sector);
  s.asset1 = std::move(asset1);
  s.asset2 = std::move(asset2);
  s.initial_investment = capital_per_leg.times(2);
  s.profit = profit;
  s.annual_return_hundredths = return_hundredths(profit, s.initial_investment);
  return s;
}

inline PairSummary summarize_pair(const BacktestLedger& ledger, const BacktestConfig& config,
                                  std::string sector = {}) {
  if (ledger.rows.empty()) throw Error(ErrorCode::EmptyFrame, "ledger has no rows");
  const Money initial = config.capital_per_leg.times(2);
  return summarize_profit(ledger.rows.back().total - initial, config.capital_per_leg, ledger.asset1,
                          ledger.asset2, std::move(sector));
}

struct SectorReport {
  std::string sector;
  std::vector<PairSummary> rows;  // descending annual return
  std::size_t n_pairs = 0;
  std::size_t n_positive = 0;
  std::int64_t max_return_hundredths = 0;
};

inline SectorReport sector_report(std::vector<PairSummary> summaries, std::string sector) {
  if (summaries.empty()) throw Error(ErrorCode::EmptyList, "sector '" + sector + "' has no pair summaries");
  std::sort(summaries.begin(), summaries.end(), [](const PairSummary& a, const PairSummary& b) {
    if (a.annual_return_hundredths != b.annual_return_hundredths) {
      return a.annual_return_hundredths > b.annual_return_hundredths;
    }
    return a.pair_name() < b.pair_name();
  });
  SectorReport r;
  r.sector = std::move(sector);
  r.n_pairs = summaries.size();
  r.n_positive = static_cast<std::size_t>(std::count_if(
      summaries.begin(), summaries.end(), [](const PairSummary& s) { return s.profit.micros() > 0; }));
  r.max_return_hundredths = summaries.front().annual_return_hundredths;
  r.rows = std::move(summaries);
  return r;
}

}  // namespace pairtrade
