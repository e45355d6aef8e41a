#pragma once

// Augmented Dickey-Fuller test with AIC lag selection, and the Engle-Granger
// two-step cointegration test built on it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pairtrade/error.hpp"
#include "pairtrade/mackinnon.hpp"
#include "pairtrade/marketdata.hpp"

namespace pairtrade {

using CriticalValues = std::array<double, 3>;  // indexed by Level

inline CriticalValues critical_values(int n_series, Deterministic det, double sample_size,
                                      const MacKinnonTables& tables = MacKinnonTables::builtin()) {
  CriticalValues cv{};
  for (Level l : kLevels) cv[static_cast<std::size_t>(l)] = tables.crit(n_series, det, l, sample_size);
  return cv;
}

struct AdfResult {
  double tau = 0.0;
  std::size_t used_lags = 0;
  std::size_t max_lag = 0;
  std::size_t n_eff = 0;
  CriticalValues crit{};
  double p_value = 1.0;
  Deterministic deterministic = Deterministic::Constant;
  /// AIC of the selected auxiliary regression on the common selection sample.
  double aic = 0.0;

  [[nodiscard]] double crit_at(Level l) const { return crit[static_cast<std::size_t>(l)]; }
  /// Unit root rejected: tau below (more negative than) the critical value.
  [[nodiscard]] bool stationary_at(Level l) const { return tau < crit_at(l); }
};

/// Schwert's rule floor(12 * (n/100)^(1/4)).
inline std::size_t default_max_lag(std::size_t n) {
  return static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

namespace detail {

struct LsFit {
  double coef = 0.0;  // coefficient on the lagged level
  double se = 0.0;
  double ssr = 0.0;
  std::size_t nobs = 0;
  std::size_t nparams = 0;

  [[nodiscard]] double aic() const {
    constexpr double log_2pi = 1.8378770664093454836;
    const auto m = static_cast<double>(nobs);
    const double llf = -0.5 * m * (log_2pi + std::log(ssr / m) + 1.0);
    return -2.0 * llf + 2.0 * static_cast<double>(nparams);
  }
};

/// Regresses dy[j] on [y[j], dy[j-1..j-lags], const?] for j in [first, dy.size()).
/// y[j] is the level preceding dy[j].
inline LsFit adf_regression(std::span<const double> y, std::span<const double> dy, std::size_t first,
                            std::size_t lags, Deterministic det) {
  const std::size_t m = dy.size() - first;
  const std::size_t p = 1 + lags + (det == Deterministic::Constant ? 1 : 0);
  if (m <= p) throw Error(ErrorCode::SeriesTooShort, "too few observations for ADF regression");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p));
  Eigen::VectorXd b(static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t j = first + r;
    const auto row = static_cast<Eigen::Index>(r);
    b(row) = dy[j];
    X(row, 0) = y[j];
    for (std::size_t i = 1; i <= lags; ++i) X(row, static_cast<Eigen::Index>(i)) = dy[j - i];
    if (det == Deterministic::Constant) X(row, static_cast<Eigen::Index>(p - 1)) = 1.0;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < static_cast<Eigen::Index>(p)) {
    throw Error(ErrorCode::ConstantSeries, "ADF regression is singular");
  }
  const Eigen::VectorXd beta = qr.solve(b);
  const double ssr = (b - X * beta).squaredNorm();
  if (!(ssr > 0.0)) throw Error(ErrorCode::ConstantSeries, "ADF regression fits exactly");

  // Var(beta) = s^2 (X'X)^-1 = s^2 P R^-1 R^-T P'.
  const auto pi = static_cast<Eigen::Index>(p);
  const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(pi, pi).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(pi, pi));
  Eigen::Index pos = 0;
  const auto& perm = qr.colsPermutation().indices();
  while (perm(pos) != 0) ++pos;
  const double s2 = ssr / static_cast<double>(m - p);

  LsFit fit;
  fit.coef = beta(0);
  fit.se = std::sqrt(s2 * Rinv.row(pos).squaredNorm());
  fit.ssr = ssr;
  fit.nobs = m;
  fit.nparams = p;
  return fit;
}

struct AdfCore {
  double tau;
  std::size_t used_lags;
  std::size_t max_lag;
  std::size_t n_eff;
  double aic;
};

inline AdfCore adf_core(std::span<const double> y, Deterministic det, std::optional<std::size_t> max_lag) {
  const std::size_t n = y.size();
  const std::size_t lag_cap = max_lag.value_or(default_max_lag(n));
  if (n < 10 + lag_cap) {
    throw Error(ErrorCode::SeriesTooShort, "ADF needs n >= 10 + max_lag (n=" + std::to_string(n) +
                                               ", max_lag=" + std::to_string(lag_cap) + ")");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvariantViolation, "ADF input is not finite");
  }
  if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); })) {
    throw Error(ErrorCode::ConstantSeries, "ADF input is constant");
  }
  std::vector<double> dy(n - 1);
  for (std::size_t t = 1; t < n; ++t) dy[t - 1] = y[t] - y[t - 1];

  // Every candidate uses the sample available at the largest lag, so the AICs are comparable.
  std::size_t best = 0;
  double best_aic = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= lag_cap; ++k) {
    const double aic = adf_regression(y, dy, lag_cap, k, det).aic();
    if (aic < best_aic) {
      best_aic = aic;
      best = k;
    }
  }
  const LsFit fit = adf_regression(y, dy, best, best, det);
  return {fit.coef / fit.se, best, lag_cap, fit.nobs, best_aic};
}

}  // namespace detail

inline AdfResult adf_test(std::span<const double> y, Deterministic det = Deterministic::Constant,
                          std::optional<std::size_t> max_lag = std::nullopt,
                          const MacKinnonTables& tables = MacKinnonTables::builtin()) {
  const auto core = detail::adf_core(y, det, max_lag);
  AdfResult r;
  r.tau = core.tau;
  r.used_lags = core.used_lags;
  r.max_lag = core.max_lag;
  r.n_eff = core.n_eff;
  r.aic = core.aic;
  r.deterministic = det;
  r.crit = critical_values(1, det, static_cast<double>(core.n_eff), tables);
  r.p_value = tables.pvalue(core.tau, 1, det);
  return r;
}

struct CointResult {
  double tau = 0.0;
  double p_value = 1.0;
  CriticalValues crit{};
  std::string dependent_ticker;
  std::string regressor_ticker;
  double intercept = 0.0;
  double slope = 0.0;
  std::size_t used_lags = 0;
  std::size_t n_eff = 0;

  [[nodiscard]] double crit_at(Level l) const { return crit[static_cast<std::size_t>(l)]; }
};

/// Engle-Granger: y = c + b x + u by least squares, then an ADF (no
/// deterministic terms) on u scored against the two-series surfaces.
inline CointResult engle_granger(std::span<const double> y, std::span<const double> x,
                                 std::optional<std::size_t> max_lag = std::nullopt,
                                 const MacKinnonTables& tables = MacKinnonTables::builtin()) {
  if (y.size() != x.size()) throw Error(ErrorCode::LengthMismatch, "cointegration inputs differ in length");
  const std::size_t n = y.size();
  if (n < 30) throw Error(ErrorCode::SeriesTooShort, "cointegration test needs >= 30 observations");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    mx += x[t];
    my += y[t];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    sxx += (x[t] - mx) * (x[t] - mx);
    sxy += (x[t] - mx) * (y[t] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::DegenerateRegressor, "cointegration regressor is constant");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  std::vector<double> u(n);
  for (std::size_t t = 0; t < n; ++t) u[t] = y[t] - intercept - slope * x[t];

  const auto core = detail::adf_core(u, Deterministic::None, max_lag);
  CointResult r;
  r.tau = core.tau;
  r.p_value = tables.pvalue(core.tau, 2, Deterministic::Constant);
  r.crit = critical_values(2, Deterministic::Constant, static_cast<double>(core.n_eff), tables);
  r.intercept = intercept;
  r.slope = slope;
  r.used_lags = core.used_lags;
  r.n_eff = core.n_eff;
  return r;
}

inline CointResult engle_granger(const PriceSeries& y, const PriceSeries& x,
                                 std::optional<std::size_t> max_lag = std::nullopt) {
  if (y.size() != x.size() || !std::equal(y.dates().begin(), y.dates().end(), x.dates().begin())) {
    throw Error(ErrorCode::LengthMismatch, y.ticker() + "/" + x.ticker() + ": series not aligned");
  }
  CointResult r = engle_granger(y.closes(), x.closes(), max_lag);
  r.dependent_ticker = y.ticker();
  r.regressor_ticker = x.ticker();
  return r;
}

}  // namespace pairtrade
