#pragma once

// Sector-wide cointegration scan, pair selection and pair-model fitting.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pairtrade/econometrics.hpp"
#include "pairtrade/error.hpp"
#include "pairtrade/marketdata.hpp"
#include "pairtrade/unitroot.hpp"

namespace pairtrade {

/// Higher mean close first (the predictor); equal means fall back to ticker order.
inline std::pair<const PriceSeries*, const PriceSeries*> order_pair(const PriceSeries& a,
                                                                    const PriceSeries& b) {
  const double ma = a.mean_close();
  const double mb = b.mean_close();
  if (ma > mb) return {&a, &b};
  if (mb > ma) return {&b, &a};
  return a.ticker() <= b.ticker() ? std::pair{&a, &b} : std::pair{&b, &a};
}

struct CointCell {
  double p_value = 1.0;
  double tau = 0.0;
  std::string predictor;  // regressor in the test
  std::string target;     // dependent variable in the test
};

/// Engle-Granger p-values for every unordered ticker pair (upper triangle).
class PValueMatrix {
 public:
  PValueMatrix() = default;
  explicit PValueMatrix(std::vector<std::string> tickers)
      : tickers_(std::move(tickers)),
        cells_(tickers_.size(), std::vector<std::optional<CointCell>>(tickers_.size())) {}

  [[nodiscard]] const std::vector<std::string>& tickers() const noexcept { return tickers_; }
  [[nodiscard]] std::size_t size() const noexcept { return tickers_.size(); }

  void set(std::size_t i, std::size_t j, CointCell cell) {
    if (i == j) throw Error(ErrorCode::InvariantViolation, "diagonal p-value cell");
    if (i > j) std::swap(i, j);
    cells_.at(i).at(j) = std::move(cell);
  }
  [[nodiscard]] const std::optional<CointCell>& cell(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return cells_.at(i).at(j);
  }
  [[nodiscard]] std::optional<double> p_value(std::size_t i, std::size_t j) const {
    if (i == j) return std::nullopt;
    const auto& c = cell(i, j);
    return c ? std::optional<double>(c->p_value) : std::nullopt;
  }
  [[nodiscard]] std::size_t populated() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = i + 1; j < size(); ++j) count += cells_[i][j].has_value();
    }
    return count;
  }

 private:
  std::vector<std::string> tickers_;
  std::vector<std::vector<std::optional<CointCell>>> cells_;
};

inline PValueMatrix coint_matrix(const AlignedPanel& panel, std::optional<std::size_t> max_lag = std::nullopt) {
  if (panel.num_tickers() < 2) throw Error(ErrorCode::Config, "cointegration scan needs >= 2 tickers");
  if (panel.num_dates() < 30) throw Error(ErrorCode::SeriesTooShort, "cointegration scan needs >= 30 dates");
  std::vector<PriceSeries> series;
  for (std::size_t i = 0; i < panel.num_tickers(); ++i) series.push_back(panel.series(i));

  PValueMatrix m({panel.tickers().begin(), panel.tickers().end()});
  for (std::size_t i = 0; i < series.size(); ++i) {
    for (std::size_t j = i + 1; j < series.size(); ++j) {
      const auto [predictor, target] = order_pair(series[i], series[j]);
      try {
        const CointResult r = engle_granger(*target, *predictor, max_lag);
        m.set(i, j, {r.p_value, r.tau, predictor->ticker(), target->ticker()});
      } catch (const Error& e) {
        throw Error(e.code(), "pair " + predictor->ticker() + "-" + target->ticker() + ": " + e.what());
      }
    }
  }
  return m;
}

struct SelectedPair {
  std::string predictor;  // asset1
  std::string target;     // asset2
  double coint_p = std::numeric_limits<double>::quiet_NaN();
  bool near_threshold = false;

  friend bool operator==(const SelectedPair&, const SelectedPair&) = default;
};

/// Pairs below `threshold`, plus flagged pairs in [threshold, threshold + near_eps).
inline std::vector<SelectedPair> select_pairs(const PValueMatrix& m, double threshold = 0.05,
                                              double near_eps = 0.02) {
  std::vector<SelectedPair> out;
  if (!(threshold > 0.0)) return out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      const auto& c = m.cell(i, j);
      if (!c) continue;
      if (c->p_value < threshold) {
        out.push_back({c->predictor, c->target, c->p_value, false});
      } else if (c->p_value < threshold + near_eps) {
        out.push_back({c->predictor, c->target, c->p_value, true});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const SelectedPair& a, const SelectedPair& b) {
    if (a.coint_p != b.coint_p) return a.coint_p < b.coint_p;
    if (a.predictor != b.predictor) return a.predictor < b.predictor;
    return a.target < b.target;
  });
  return out;
}

enum class ResidualVerdict {
  Stationary,            // unit root rejected at 1%
  NonStationary,
  DegenerateStationary,  // residuals identically zero/constant; ADF undefined
};

inline constexpr std::string_view to_string(ResidualVerdict v) noexcept {
  switch (v) {
    case ResidualVerdict::Stationary: return "stationary";
    case ResidualVerdict::NonStationary: return "non_stationary";
    case ResidualVerdict::DegenerateStationary: return "degenerate_stationary";
  }
  return "?";
}

struct PairModel {
  SelectedPair pair;
  OlsOriginReport ols;
  std::optional<AdfResult> residual_adf;
  ResidualVerdict verdict = ResidualVerdict::NonStationary;
  Window train_window;

  [[nodiscard]] double hedge_ratio() const noexcept { return ols.hedge_ratio; }
};

/// Regresses target on predictor over the training window and tests the
/// residuals for a unit root. A model is returned whatever the verdict.
inline PairModel fit_pair(const PriceSeries& predictor, const PriceSeries& target, Window train,
                          std::optional<SelectedPair> selection = std::nullopt) {
  const PriceSeries p_train = slice_window(predictor, train);
  const PriceSeries t_train = slice_window(target, train);
  const AlignedPanel panel = align_panel({p_train, t_train});
  if (panel.num_dates() < 30) {
    throw Error(ErrorCode::SeriesTooShort, predictor.ticker() + "-" + target.ticker() +
                                               ": fewer than 30 common training dates");
  }
  PairModel model;
  model.pair = selection.value_or(SelectedPair{predictor.ticker(), target.ticker()});
  model.train_window = train;
  model.ols = ols_through_origin(panel.series(0), panel.series(1));
  try {
    model.residual_adf = adf_test(model.ols.residuals, Deterministic::Constant);
    model.verdict = model.residual_adf->stationary_at(Level::P1) ? ResidualVerdict::Stationary
                                                                 : ResidualVerdict::NonStationary;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ConstantSeries) throw;
    model.verdict = ResidualVerdict::DegenerateStationary;
  }
  return model;
}

}  // namespace pairtrade
