#pragma once

// Pearson correlation and the single-regressor, no-intercept OLS model with the
// residual diagnostics printed in a standard regression summary.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pairtrade/distributions.hpp"
#include "pairtrade/error.hpp"
#include "pairtrade/marketdata.hpp"

namespace pairtrade {

// ============================================================================
// Correlation
// ============================================================================

inline double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "correlation inputs differ in length");
  if (a.size() < 3) throw Error(ErrorCode::SeriesTooShort, "correlation needs at least 3 observations");
  const auto n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw Error(ErrorCode::ZeroVariance, "constant correlation input");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

inline double pearson_correlation(const ReturnSeries& a, const ReturnSeries& b) {
  if (a.dates != b.dates) {
    throw Error(ErrorCode::LengthMismatch, a.ticker + "/" + b.ticker + ": return dates differ");
  }
  try {
    return pearson(a.values, b.values);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroVariance) throw;
    throw Error(ErrorCode::ZeroVariance, a.ticker + "/" + b.ticker + ": constant returns");
  }
}

struct CorrelationMatrix {
  std::vector<std::string> tickers;
  std::vector<std::vector<double>> values;
};

/// Pairwise Pearson coefficients of the simple returns of every panel column.
inline CorrelationMatrix correlation_matrix(const AlignedPanel& panel) {
  if (panel.num_tickers() < 2) throw Error(ErrorCode::Config, "correlation matrix needs >= 2 tickers");
  if (panel.num_dates() < 3) throw Error(ErrorCode::SeriesTooShort, "correlation matrix needs >= 3 dates");
  const std::size_t k = panel.num_tickers();
  std::vector<ReturnSeries> returns;
  returns.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    returns.push_back(pct_change(panel.series(i)));
    const auto& v = returns.back().values;
    if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) {
      throw Error(ErrorCode::ZeroVariance, returns.back().ticker + ": constant returns");
    }
  }
  CorrelationMatrix m;
  m.tickers.assign(panel.tickers().begin(), panel.tickers().end());
  m.values.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double r = pearson_correlation(returns[i], returns[j]);
      m.values[i][j] = r;
      m.values[j][i] = r;
    }
  }
  return m;
}

// ============================================================================
// Residual diagnostics
// ============================================================================

struct Moments {
  double mean;
  double variance;  // divide-by-n
  double skew;
  double kurtosis;  // raw, normal = 3
};

inline Moments population_moments(std::span<const double> e) {
  const auto n = static_cast<double>(e.size());
  double mean = 0.0;
  for (double v : e) mean += v;
  mean /= n;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double v : e) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 == 0.0) throw Error(ErrorCode::ZeroVariance, "residuals have zero variance");
  return {mean, m2, m3 / std::pow(m2, 1.5), m4 / (m2 * m2)};
}

inline double durbin_watson(std::span<const double> e) {
  if (e.size() < 2) throw Error(ErrorCode::SeriesTooShort, "Durbin-Watson needs >= 2 residuals");
  double num = 0.0;
  double den = e[0] * e[0];
  for (std::size_t t = 1; t < e.size(); ++t) {
    const double d = e[t] - e[t - 1];
    num += d * d;
    den += e[t] * e[t];
  }
  if (den == 0.0) throw Error(ErrorCode::AllZeroResiduals, "Durbin-Watson undefined for zero residuals");
  return num / den;
}

struct JarqueBera {
  double statistic;
  double p_value;
  double skew;
  double kurtosis;
};

inline JarqueBera jarque_bera(std::span<const double> e) {
  if (e.size() < 4) throw Error(ErrorCode::SampleTooSmall, "Jarque-Bera needs >= 4 residuals");
  const Moments m = population_moments(e);
  const auto n = static_cast<double>(e.size());
  const double excess = m.kurtosis - 3.0;
  const double jb = n / 6.0 * (m.skew * m.skew + excess * excess / 4.0);
  return {jb, dist::chi2_sf(jb, 2.0), m.skew, m.kurtosis};
}

struct OmnibusK2 {
  double statistic;
  double p_value;
  double z_skew;
  double z_kurtosis;
};

/// D'Agostino skewness z-score.
inline double skewness_z(double skew, double n) {
  double y = skew * std::sqrt((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0)));
  const double beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0) /
                       ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
  const double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
  const double delta = 1.0 / std::sqrt(0.5 * std::log(w2));
  const double alpha = std::sqrt(2.0 / (w2 - 1.0));
  if (y == 0.0) return 0.0;
  y /= alpha;
  return delta * std::log(y + std::sqrt(y * y + 1.0));
}

/// Anscombe-Glynn kurtosis z-score (raw kurtosis input).
inline double kurtosis_z(double kurtosis, double n) {
  const double expected = 3.0 * (n - 1.0) / (n + 1.0);
  const double var = 24.0 * n * (n - 2.0) * (n - 3.0) / ((n + 1.0) * (n + 1.0) * (n + 3.0) * (n + 5.0));
  const double x = (kurtosis - expected) / std::sqrt(var);
  const double sqrt_beta1 = 6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0)) *
                            std::sqrt(6.0 * (n + 3.0) * (n + 5.0) / (n * (n - 2.0) * (n - 3.0)));
  const double a = 6.0 + 8.0 / sqrt_beta1 * (2.0 / sqrt_beta1 + std::sqrt(1.0 + 4.0 / (sqrt_beta1 * sqrt_beta1)));
  const double term1 = 1.0 - 2.0 / (9.0 * a);
  const double denom = 1.0 + x * std::sqrt(2.0 / (a - 4.0));
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double term2 = std::copysign(std::cbrt((1.0 - 2.0 / a) / std::fabs(denom)), denom);
  return (term1 - term2) / std::sqrt(2.0 / (9.0 * a));
}

/// D'Agostino-Pearson K^2 omnibus normality test.
inline OmnibusK2 omnibus_k2(std::span<const double> e) {
  if (e.size() < 20) throw Error(ErrorCode::SampleTooSmall, "omnibus test needs >= 20 residuals");
  const Moments m = population_moments(e);
  const auto n = static_cast<double>(e.size());
  const double z1 = skewness_z(m.skew, n);
  const double z2 = kurtosis_z(m.kurtosis, n);
  const double k2 = z1 * z1 + z2 * z2;
  return {k2, dist::chi2_sf(k2, 2.0), z1, z2};
}

// ============================================================================
// No-intercept OLS
// ============================================================================

struct OlsOriginReport {
  std::string dependent;  // y ticker
  std::string regressor;  // x ticker
  std::size_t n_obs = 0;
  std::size_t df_resid = 0;
  double hedge_ratio = 0.0;
  double se_beta = 0.0;
  double t_stat = 0.0;
  double p_t = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double f_stat = 0.0;
  double p_f = 0.0;
  double r2_uncentered = 0.0;
  double adj_r2_uncentered = 0.0;
  double log_likelihood = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  /// Absent when undefined (zero residuals, or too few observations).
  std::optional<double> durbin_watson;
  std::optional<JarqueBera> jarque_bera;
  std::optional<OmnibusK2> omnibus;
  double cond_no = 1.0;
  /// Residuals are identically zero (y exactly proportional to x).
  bool exact_fit = false;
  std::vector<Date> dates;
  std::vector<double> residuals;
};

/// Fits y_t = beta * x_t + e_t over raw vectors.
inline OlsOriginReport ols_through_origin(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "regression inputs differ in length");
  if (x.size() < 2) throw Error(ErrorCode::SeriesTooShort, "regression needs >= 2 observations");
  const std::size_t n = x.size();
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    sxx += x[t] * x[t];
    sxy += x[t] * y[t];
    syy += y[t] * y[t];
  }
  if (sxx == 0.0) throw Error(ErrorCode::DegenerateRegressor, "regressor is identically zero");

  OlsOriginReport r;
  r.n_obs = n;
  r.df_resid = n - 1;
  r.hedge_ratio = sxy / sxx;
  r.residuals.resize(n);
  double ssr = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    r.residuals[t] = y[t] - r.hedge_ratio * x[t];
    ssr += r.residuals[t] * r.residuals[t];
  }
  const auto nd = static_cast<double>(n);
  const auto df = static_cast<double>(r.df_resid);
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double log_2pi = 1.8378770664093454836;

  r.exact_fit = ssr == 0.0;
  r.se_beta = std::sqrt(ssr / df / sxx);
  r.t_stat = r.exact_fit ? std::copysign(inf, r.hedge_ratio) : r.hedge_ratio / r.se_beta;
  r.p_t = r.exact_fit ? 0.0 : dist::student_t_two_sided(r.t_stat, df);
  const double tq = dist::student_t_quantile(0.975, df);
  r.ci_low = r.hedge_ratio - tq * r.se_beta;
  r.ci_high = r.hedge_ratio + tq * r.se_beta;
  r.f_stat = r.exact_fit ? inf : r.t_stat * r.t_stat;
  r.p_f = r.exact_fit ? 0.0 : dist::f_sf(r.f_stat, 1.0, df);
  r.r2_uncentered = syy == 0.0 ? 0.0 : std::clamp(1.0 - ssr / syy, 0.0, 1.0);
  r.adj_r2_uncentered = 1.0 - nd / df * (1.0 - r.r2_uncentered);
  r.log_likelihood = r.exact_fit ? inf : -0.5 * nd * (log_2pi + std::log(ssr / nd) + 1.0);
  r.aic = 2.0 - 2.0 * r.log_likelihood;
  r.bic = std::log(nd) - 2.0 * r.log_likelihood;
  r.cond_no = 1.0;

  if (!r.exact_fit) {
    r.durbin_watson = durbin_watson(r.residuals);
    bool constant = std::all_of(r.residuals.begin(), r.residuals.end(),
                                [&](double v) { return v == r.residuals.front(); });
    if (n >= 4 && !constant) r.jarque_bera = jarque_bera(r.residuals);
    if (n >= 20 && !constant) r.omnibus = omnibus_k2(r.residuals);
  }
  return r;
}

/// Regresses the `y` price series on the `x` price series (dates must match).
inline OlsOriginReport ols_through_origin(const PriceSeries& x, const PriceSeries& y) {
  if (x.size() != y.size() || !std::equal(x.dates().begin(), x.dates().end(), y.dates().begin())) {
    throw Error(ErrorCode::LengthMismatch, y.ticker() + " ~ " + x.ticker() + ": series not aligned");
  }
  OlsOriginReport r = ols_through_origin(x.closes(), y.closes());
  r.dependent = y.ticker();
  r.regressor = x.ticker();
  r.dates.assign(x.dates().begin(), x.dates().end());
  return r;
}

}  // namespace pairtrade
