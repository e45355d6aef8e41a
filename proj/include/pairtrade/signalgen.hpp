#pragma once

// Price-ratio z-score band signals, first-difference positions and trade
// triggers for a two-leg pair.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pairtrade/date.hpp"
#include "pairtrade/error.hpp"
#include "pairtrade/marketdata.hpp"

namespace pairtrade {

struct RatioSeries {
  std::vector<Date> dates;
  std::vector<double> values;
};

struct RatioStats {
  double mean = 0.0;
  double stddev = 0.0;  // population
  Window fit_window;
};

struct Bands {
  double upper = 1.0;
  double lower = -1.0;
};

/// close1 / close2 on every (shared) date.
inline RatioSeries ratio_series(const PriceSeries& asset1, const PriceSeries& asset2) {
  if (asset1.size() != asset2.size() ||
      !std::equal(asset1.dates().begin(), asset1.dates().end(), asset2.dates().begin())) {
    throw Error(ErrorCode::LengthMismatch, asset1.ticker() + "/" + asset2.ticker() + ": series not aligned");
  }
  RatioSeries r;
  r.dates.assign(asset1.dates().begin(), asset1.dates().end());
  r.values.resize(asset1.size());
  for (std::size_t t = 0; t < asset1.size(); ++t) r.values[t] = asset1.closes()[t] / asset2.closes()[t];
  return r;
}

inline RatioStats fit_ratio_stats(const RatioSeries& ratio, Window fit_window) {
  std::vector<double> v;
  for (std::size_t t = 0; t < ratio.dates.size(); ++t) {
    if (fit_window.contains(ratio.dates[t])) v.push_back(ratio.values[t]);
  }
  if (v.empty()) throw Error(ErrorCode::EmptyWindow, "no ratio observations in the fit window");
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(v.size()));
  if (v.size() < 2 || !(sd > 0.0)) throw Error(ErrorCode::ZeroVariance, "ratio is constant over the fit window");
  return {mean, sd, fit_window};
}

inline std::vector<double> zscore_series(std::span<const double> ratio, const RatioStats& stats) {
  if (!(stats.stddev > 0.0)) throw Error(ErrorCode::ZeroVariance, "ratio standard deviation is zero");
  std::vector<double> z(ratio.size());
  for (std::size_t t = 0; t < ratio.size(); ++t) z[t] = (ratio[t] - stats.mean) / stats.stddev;
  return z;
}

struct SignalColumns {
  std::vector<int> signals1;
  std::vector<int> signals2;
};

/// Short asset1 strictly above the upper band, long strictly below the lower band, flat otherwise.
inline SignalColumns gen_signals(std::span<const double> z, Bands bands = {}) {
  SignalColumns s;
  s.signals1.reserve(z.size());
  s.signals2.reserve(z.size());
  for (double v : z) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvariantViolation, "z-score is not finite");
    const int s1 = v > bands.upper ? -1 : (v < bands.lower ? 1 : 0);
    s.signals1.push_back(s1);
    s.signals2.push_back(-s1);
  }
  return s;
}

/// First difference with a flat state before the first row.
inline std::vector<int> gen_positions(std::span<const int> signals) {
  std::vector<int> p(signals.size());
  int prev = 0;
  for (std::size_t t = 0; t < signals.size(); ++t) {
    if (signals[t] < -1 || signals[t] > 1) throw Error(ErrorCode::InvariantViolation, "signal outside {-1,0,1}");
    p[t] = signals[t] - prev;
    prev = signals[t];
  }
  return p;
}

struct FrameRow {
  Date date;
  double asset1 = 0.0;
  double asset2 = 0.0;
  double z_score = 0.0;
  double upper_limit = 1.0;
  double lower_limit = -1.0;
  int signals1 = 0;
  int signals2 = 0;
  int positions1 = 0;
  int positions2 = 0;

  friend bool operator==(const FrameRow&, const FrameRow&) = default;
};

struct TradingFrame {
  std::string asset1;
  std::string asset2;
  std::vector<FrameRow> rows;

  friend bool operator==(const TradingFrame&, const TradingFrame&) = default;
};

/// Throws InvariantViolation unless the legs mirror each other and positions
/// are the first difference of signals.
inline void validate_frame(const TradingFrame& f) {
  int prev = 0;
  for (const auto& r : f.rows) {
    const std::string at = " on " + r.date.iso();
    if (r.signals1 < -1 || r.signals1 > 1) throw Error(ErrorCode::InvariantViolation, "signals1 out of range" + at);
    if (r.signals2 != -r.signals1) throw Error(ErrorCode::InvariantViolation, "signals2 != -signals1" + at);
    if (r.positions2 != -r.positions1) throw Error(ErrorCode::InvariantViolation, "positions2 != -positions1" + at);
    if (r.positions1 != r.signals1 - prev) {
      throw Error(ErrorCode::InvariantViolation, "positions1 is not the difference of signals1" + at);
    }
    prev = r.signals1;
  }
}

/// Builds the trading table over `window` using statistics fitted elsewhere.
inline TradingFrame build_frame(const PriceSeries& asset1, const PriceSeries& asset2, const RatioStats& stats,
                                Window window, Bands bands = {}) {
  const AlignedPanel panel = align_panel({slice_window(asset1, window), slice_window(asset2, window)});
  const PriceSeries a1 = panel.series(0);
  const PriceSeries a2 = panel.series(1);
  const RatioSeries ratio = ratio_series(a1, a2);
  const auto z = zscore_series(ratio.values, stats);
  const auto sig = gen_signals(z, bands);
  const auto pos1 = gen_positions(sig.signals1);

  TradingFrame f;
  f.asset1 = asset1.ticker();
  f.asset2 = asset2.ticker();
  f.rows.reserve(z.size());
  for (std::size_t t = 0; t < z.size(); ++t) {
    f.rows.push_back({ratio.dates[t], a1.closes()[t], a2.closes()[t], z[t], bands.upper, bands.lower,
                      sig.signals1[t], sig.signals2[t], pos1[t], -pos1[t]});
  }
  return f;
}

enum class Leg { Asset1, Asset2 };
enum class TriggerAction { OpenLong, OpenShort, Close, FlipToLong, FlipToShort };

inline constexpr std::string_view to_string(Leg leg) noexcept {
  return leg == Leg::Asset1 ? "asset1" : "asset2";
}

inline constexpr std::string_view to_string(TriggerAction a) noexcept {
  switch (a) {
    case TriggerAction::OpenLong: return "open_long";
    case TriggerAction::OpenShort: return "open_short";
    case TriggerAction::Close: return "close";
    case TriggerAction::FlipToLong: return "flip_to_long";
    case TriggerAction::FlipToShort: return "flip_to_short";
  }
  return "?";
}

struct Trigger {
  Date date;
  Leg leg = Leg::Asset1;
  TriggerAction action = TriggerAction::OpenLong;
  int lots = 1;

  friend bool operator==(const Trigger&, const Trigger&) = default;
};

namespace detail {

inline TriggerAction classify(int before, int delta) {
  if (delta == 2) return TriggerAction::FlipToLong;
  if (delta == -2) return TriggerAction::FlipToShort;
  if (before == 0) return delta > 0 ? TriggerAction::OpenLong : TriggerAction::OpenShort;
  return TriggerAction::Close;
}

}  // namespace detail

/// One trigger per nonzero position entry per leg, asset1 before asset2 on a date.
inline std::vector<Trigger> extract_triggers(const TradingFrame& frame) {
  validate_frame(frame);
  std::vector<Trigger> out;
  int prev1 = 0;
  for (const auto& r : frame.rows) {
    if (r.positions1 != 0) {
      const int prev2 = -prev1;
      out.push_back({r.date, Leg::Asset1, detail::classify(prev1, r.positions1), std::abs(r.positions1)});
      out.push_back({r.date, Leg::Asset2, detail::classify(prev2, r.positions2), std::abs(r.positions2)});
    }
    prev1 = r.signals1;
  }
  return out;
}

}  // namespace pairtrade
