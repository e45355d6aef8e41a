#pragma once

// Shared fixtures, deterministic generators and independent oracles.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pairtrade/backtest.hpp"
#include "pairtrade/date.hpp"
#include "pairtrade/marketdata.hpp"
#include "pairtrade/signalgen.hpp"

namespace testing_support {

using namespace pairtrade;

/// SplitMix64 with Irwin-Hall normals; mirrored bit-for-bit by the Python
/// oracle script so both sides see identical inputs.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next() {
    s_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }
  double normal() {
    double acc = 0.0;
    for (int i = 0; i < 12; ++i) acc += uniform();
    return acc - 6.0;
  }

 private:
  std::uint64_t s_;
};

inline std::vector<double> walk(SplitMix& g, std::size_t n, double start, double step) {
  std::vector<double> out(n);
  double v = start;
  for (auto& o : out) {
    v += step * g.normal();
    o = v;
  }
  return out;
}

/// x: random walk from 100; y = 0.5 x + MA(1) noise.
inline std::pair<std::vector<double>, std::vector<double>> fixture_pair(std::uint64_t seed, std::size_t n) {
  SplitMix g(seed);
  auto x = walk(g, n, 100.0, 1.0);
  std::vector<double> y(n);
  double prev = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double e = g.normal();
    y[t] = 0.5 * x[t] + e + 0.6 * prev;
    prev = e;
  }
  return {x, y};
}

inline std::vector<double> ar1(std::uint64_t seed, std::size_t n, double phi) {
  SplitMix g(seed);
  std::vector<double> out(n);
  double v = 0.0;
  for (auto& o : out) {
    v = phi * v + g.normal();
    o = v;
  }
  return out;
}

/// Gaussian draws via the standard library (Monte-Carlo suites).
class Gauss {
 public:
  explicit Gauss(std::uint64_t seed) : rng_(seed) {}
  double operator()() { return z_(rng_); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> z_{0.0, 1.0};
};

inline std::vector<double> random_walk(Gauss& g, std::size_t n, double start = 0.0) {
  std::vector<double> out(n);
  double v = start;
  for (auto& o : out) {
    v += g();
    o = v;
  }
  return out;
}

inline std::vector<double> ar1(Gauss& g, std::size_t n, double phi, double sigma = 1.0) {
  std::vector<double> out(n);
  double v = 0.0;
  for (auto& o : out) {
    v = phi * v + sigma * g();
    o = v;
  }
  return out;
}

inline std::vector<Date> consecutive_days(Date start, std::size_t n) {
  std::vector<Date> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(start.plus_days(static_cast<int>(i)));
  return out;
}

inline PriceSeries series(const std::string& ticker, std::vector<double> closes, Date start = Date(2021, 1, 1)) {
  auto dates = consecutive_days(start, closes.size());
  return PriceSeries(ticker, std::move(dates), std::move(closes));
}

/// Frame built straight from signals and closes (legs mirrored, positions differenced).
inline TradingFrame frame_from_signals(const std::vector<double>& c1, const std::vector<double>& c2,
                                       const std::vector<int>& s1, Date start = Date(2021, 1, 1)) {
  TradingFrame f;
  f.asset1 = "AAA";
  f.asset2 = "BBB";
  int prev = 0;
  for (std::size_t t = 0; t < s1.size(); ++t) {
    FrameRow r;
    r.date = start.plus_days(static_cast<int>(t));
    r.asset1 = c1[t];
    r.asset2 = c2[t];
    r.signals1 = s1[t];
    r.signals2 = -s1[t];
    r.positions1 = s1[t] - prev;
    r.positions2 = -r.positions1;
    prev = s1[t];
    f.rows.push_back(r);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Reported sector tables: (sector, pair, profit, printed annual return in
// hundredths). The auto-sector lead row uses the profit implied by its final
// portfolio value; the IT row with the inconsistent profit sign is flagged.
// ---------------------------------------------------------------------------

struct ReportedRow {
  const char* sector;
  const char* pair;
  std::int64_t profit;
  std::int64_t printed_hundredths;
  bool sign_anomaly;
};

inline const std::vector<ReportedRow>& reported_rows() {
  static const std::vector<ReportedRow> rows{
      {"Auto", "BF - AL", 35269, 1763, false},     {"Auto", "EM - AL", 27773, 1389, false},
      {"Auto", "MS - EM", 23968, 1198, false},     {"Auto", "MS - AL", 22503, 1125, false},
      {"Auto", "EM - BF", 21608, 1080, false},     {"Auto", "MS - BF", 20300, 1015, false},
      {"Banking", "SB - IF", 19926, 996, false},   {"Banking", "FB - IF", 19300, 965, false},
      {"Banking", "HD - KM", 11056, 553, false},   {"Banking", "IC - KM", 3638, 182, false},
      {"Banking", "AX - SB", -17575, -879, false}, {"IT", "TC - CF", 17460, 873, false},
      {"IT", "IF - HC", 10940, 547, false},        {"IT", "TM - LS", 6720, 336, false},
      {"IT", "WP - LS", 3740, 187, false},         {"IT", "TC - WP", -8660, -433, false},
      {"IT", "HC - LI", 13580, -679, true},        {"Pharma", "LP - AK", 34986, 1749, false},
      {"Pharma", "LP - BI", 26993, 1350, false},   {"Pharma", "DR - DV", 10942, 547, false},
      {"Pharma", "CI - BI", 7614, 381, false},     {"Pharma", "LP - LR", -15812, -791, false},
      {"Realty", "OR - PE", 32488, 1624, false},   {"Realty", "DL - OR", 27337, 1367, false},
      {"Realty", "PM - PE", 27184, 1359, false},   {"Realty", "OR - ST", 24481, 1224, false},
      {"Realty", "OR - SB", 11711, 586, false},    {"Realty", "BE - GP", 8339, 417, false},
      {"Realty", "PM - BE", 4457, 223, false},
  };
  return rows;
}

/// Summaries for one sector; the flagged row enters with its sign corrected.
inline std::vector<PairSummary> sector_summaries(const std::string& sector) {
  std::vector<PairSummary> out;
  for (const auto& r : reported_rows()) {
    if (sector != r.sector) continue;
    const std::string pair = r.pair;
    const auto dash = pair.find(" - ");
    const std::int64_t profit = r.sign_anomaly ? -r.profit : r.profit;
    out.push_back(summarize_profit(Money::units(profit), Money::units(100'000), pair.substr(0, dash),
                                   pair.substr(dash + 3), sector));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Independent oracles
// ---------------------------------------------------------------------------

/// Direct-formula no-intercept OLS in long double.
struct OlsOracle {
  long double beta, se, t, f, r2, dw, jb, skew, kurt;
};

inline OlsOracle ols_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += static_cast<long double>(x[i]) * x[i];
    sxy += static_cast<long double>(x[i]) * y[i];
    syy += static_cast<long double>(y[i]) * y[i];
  }
  OlsOracle o{};
  o.beta = sxy / sxx;
  std::vector<long double> e(n);
  long double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = y[i] - o.beta * x[i];
    ssr += e[i] * e[i];
  }
  o.se = std::sqrt(ssr / static_cast<long double>(n - 1) / sxx);
  o.t = o.beta / o.se;
  o.f = o.t * o.t;
  o.r2 = 1 - ssr / syy;
  long double num = 0;
  for (std::size_t i = 1; i < n; ++i) num += (e[i] - e[i - 1]) * (e[i] - e[i - 1]);
  o.dw = num / ssr;
  long double mean = 0;
  for (auto v : e) mean += v;
  mean /= static_cast<long double>(n);
  long double m2 = 0, m3 = 0, m4 = 0;
  for (auto v : e) {
    const long double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  o.skew = m3 / std::pow(m2, 1.5L);
  o.kurt = m4 / (m2 * m2);
  o.jb = static_cast<long double>(n) / 6 * (o.skew * o.skew + (o.kurt - 3) * (o.kurt - 3) / 4);
  return o;
}

inline double rel_err(double got, long double want) {
  const long double scale = std::max(std::fabs(want), 1e-300L);
  return static_cast<double>(std::fabs(static_cast<long double>(got) - want) / scale);
}

/// Replays only the trigger list against the price columns, in integer
/// micro-units, returning the per-day (cash1, cash2, total).
struct ReplayRow {
  std::int64_t cash1, cash2, total;
};

inline std::vector<ReplayRow> replay_triggers(const TradingFrame& f, const std::vector<Trigger>& triggers,
                                              std::int64_t capital_micros) {
  auto micros = [](double price) { return static_cast<std::int64_t>(std::llround(price * 1e6)); };
  const std::int64_t sh1 = capital_micros / micros(f.rows.front().asset1);
  const std::int64_t sh2 = capital_micros / micros(f.rows.front().asset2);
  std::int64_t cash1 = capital_micros;
  std::int64_t cash2 = capital_micros;
  int state1 = 0;
  int state2 = 0;
  std::size_t k = 0;
  std::vector<ReplayRow> out;
  for (const auto& r : f.rows) {
    for (; k < triggers.size() && triggers[k].date == r.date; ++k) {
      const Trigger& tr = triggers[k];
      int delta = 0;
      const int state = tr.leg == Leg::Asset1 ? state1 : state2;
      switch (tr.action) {
        case TriggerAction::OpenLong: delta = 1; break;
        case TriggerAction::OpenShort: delta = -1; break;
        case TriggerAction::Close: delta = -state; break;
        case TriggerAction::FlipToLong: delta = 2; break;
        case TriggerAction::FlipToShort: delta = -2; break;
      }
      if (tr.leg == Leg::Asset1) {
        cash1 -= delta * sh1 * micros(r.asset1);
        state1 += delta;
      } else {
        cash2 -= delta * sh2 * micros(r.asset2);
        state2 += delta;
      }
    }
    const std::int64_t h1 = state1 * sh1 * micros(r.asset1);
    const std::int64_t h2 = state2 * sh2 * micros(r.asset2);
    out.push_back({cash1, cash2, cash1 + cash2 + h1 + h2});
  }
  return out;
}

}  // namespace testing_support
