#pragma once

// CSV / JSON / text encodings of the pipeline's data products. Numbers are
// written in shortest round-trip form so re-parsing reproduces them exactly.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "pairtrade/backtest.hpp"
#include "pairtrade/econometrics.hpp"
#include "pairtrade/error.hpp"
#include "pairtrade/pairscan.hpp"
#include "pairtrade/signalgen.hpp"
#include "pairtrade/unitroot.hpp"

namespace pairtrade::io {

using nlohmann::json;

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline double parse_number(std::string_view s) {
  double v = 0.0;
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::MalformedRow, "bad number '" + std::string(s) + "'");
  }
  return v;
}

inline int parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::MalformedRow, "bad integer '" + std::string(s) + "'");
  }
  return v;
}

/// Non-finite values become null.
inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

namespace detail {

inline std::vector<std::vector<std::string>> read_csv_rows(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      std::vector<std::string> fields;
      for (auto f : pairtrade::detail::split_csv_line(line)) fields.emplace_back(f);
      rows.push_back(std::move(fields));
    }
    pos = nl + 1;
  }
  return rows;
}

inline void expect_header(const std::vector<std::vector<std::string>>& rows,
                          const std::vector<std::string>& header, std::string_view what) {
  if (rows.empty() || rows.front() != header) {
    throw Error(ErrorCode::MissingColumn, std::string(what) + ": unexpected header");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Correlation / cointegration matrices
// ---------------------------------------------------------------------------

inline std::string correlation_csv(const CorrelationMatrix& m) {
  std::ostringstream out;
  for (const auto& t : m.tickers) out << ',' << t;
  out << '\n';
  for (std::size_t i = 0; i < m.tickers.size(); ++i) {
    out << m.tickers[i];
    for (std::size_t j = 0; j < m.tickers.size(); ++j) out << ',' << format_double(m.values[i][j]);
    out << '\n';
  }
  return out.str();
}

inline json to_json(const CorrelationMatrix& m) { return {{"tickers", m.tickers}, {"values", m.values}}; }

/// Heatmap layout: upper triangle populated, diagonal and lower triangle empty.
inline std::string pvalue_csv(const PValueMatrix& m) {
  std::ostringstream out;
  for (const auto& t : m.tickers()) out << ',' << t;
  out << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << m.tickers()[i];
    for (std::size_t j = 0; j < m.size(); ++j) {
      out << ',';
      if (j > i && m.cell(i, j)) out << format_double(m.cell(i, j)->p_value);
    }
    out << '\n';
  }
  return out.str();
}

/// p-values only; predictor/target assignment lives in the JSON form.
inline std::vector<std::vector<std::optional<double>>> parse_pvalue_csv(std::string_view text,
                                                                        std::vector<std::string>* tickers = nullptr) {
  const auto rows = detail::read_csv_rows(text);
  if (rows.empty()) throw Error(ErrorCode::MissingColumn, "p-value CSV: empty");
  const std::size_t k = rows.front().size() - 1;
  if (tickers) tickers->assign(rows.front().begin() + 1, rows.front().end());
  std::vector<std::vector<std::optional<double>>> out(k, std::vector<std::optional<double>>(k));
  for (std::size_t i = 0; i < k; ++i) {
    const auto& r = rows.at(i + 1);
    for (std::size_t j = 0; j < k && j + 1 < r.size(); ++j) {
      if (!r[j + 1].empty()) out[i][j] = parse_number(r[j + 1]);
    }
  }
  return out;
}

inline json to_json(const PValueMatrix& m) {
  json cells = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (const auto& c = m.cell(i, j)) {
        cells.push_back({{"row", m.tickers()[i]},
                         {"col", m.tickers()[j]},
                         {"p_value", c->p_value},
                         {"tau", num(c->tau)},
                         {"predictor", c->predictor},
                         {"target", c->target}});
      }
    }
  }
  return {{"tickers", m.tickers()}, {"cells", cells}};
}

inline PValueMatrix pvalue_matrix_from_json(const json& j) {
  PValueMatrix m(j.at("tickers").get<std::vector<std::string>>());
  auto index = [&](const std::string& t) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.tickers()[i] == t) return i;
    }
    throw Error(ErrorCode::MalformedRow, "p-value JSON: unknown ticker " + t);
  };
  for (const auto& c : j.at("cells")) {
    m.set(index(c.at("row").get<std::string>()), index(c.at("col").get<std::string>()),
          {c.at("p_value").get<double>(), c.at("tau").is_null() ? NAN : c.at("tau").get<double>(),
           c.at("predictor").get<std::string>(), c.at("target").get<std::string>()});
  }
  return m;
}

inline json to_json(const std::vector<SelectedPair>& pairs) {
  json arr = json::array();
  for (const auto& p : pairs) {
    arr.push_back({{"asset1", p.predictor},
                   {"asset2", p.target},
                   {"coint_p", p.coint_p},
                   {"near_threshold", p.near_threshold}});
  }
  return arr;
}

inline std::vector<SelectedPair> selected_pairs_from_json(const json& j) {
  std::vector<SelectedPair> out;
  for (const auto& p : j) {
    out.push_back({p.at("asset1").get<std::string>(), p.at("asset2").get<std::string>(),
                   p.at("coint_p").get<double>(), p.at("near_threshold").get<bool>()});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Regression and unit-root results
// ---------------------------------------------------------------------------

inline json crit_json(const CriticalValues& cv) {
  json j = json::object();
  for (Level l : kLevels) j[std::string(to_string(l))] = cv[static_cast<std::size_t>(l)];
  return j;
}

inline json to_json(const AdfResult& r) {
  return {{"tau", r.tau},
          {"p_value", r.p_value},
          {"used_lags", r.used_lags},
          {"max_lag", r.max_lag},
          {"n_eff", r.n_eff},
          {"deterministic", std::string(to_string(r.deterministic))},
          {"critical_values", crit_json(r.crit)},
          {"stationary_1pct", r.stationary_at(Level::P1)},
          {"stationary_5pct", r.stationary_at(Level::P5)}};
}

inline json to_json(const CointResult& r) {
  return {{"tau", r.tau},
          {"p_value", r.p_value},
          {"dependent", r.dependent_ticker},
          {"regressor", r.regressor_ticker},
          {"intercept", r.intercept},
          {"slope", r.slope},
          {"used_lags", r.used_lags},
          {"n_eff", r.n_eff},
          {"critical_values", crit_json(r.crit)}};
}

inline json to_json(const OlsOriginReport& r) {
  json j = {{"dependent", r.dependent},
            {"regressor", r.regressor},
            {"n_obs", r.n_obs},
            {"df_resid", r.df_resid},
            {"df_model", 1},
            {"hedge_ratio", r.hedge_ratio},
            {"se_beta", num(r.se_beta)},
            {"t_stat", num(r.t_stat)},
            {"p_t", num(r.p_t)},
            {"ci_low", num(r.ci_low)},
            {"ci_high", num(r.ci_high)},
            {"f_stat", num(r.f_stat)},
            {"p_f", num(r.p_f)},
            {"r2_uncentered", r.r2_uncentered},
            {"adj_r2_uncentered", r.adj_r2_uncentered},
            {"log_likelihood", num(r.log_likelihood)},
            {"aic", num(r.aic)},
            {"bic", num(r.bic)},
            {"cond_no", r.cond_no},
            {"exact_fit", r.exact_fit}};
  j["durbin_watson"] = r.durbin_watson ? json(*r.durbin_watson) : json(nullptr);
  if (r.jarque_bera) {
    j["jarque_bera"] = r.jarque_bera->statistic;
    j["p_jb"] = r.jarque_bera->p_value;
    j["skew"] = r.jarque_bera->skew;
    j["kurtosis"] = r.jarque_bera->kurtosis;
  } else {
    j["jarque_bera"] = j["p_jb"] = j["skew"] = j["kurtosis"] = nullptr;
  }
  if (r.omnibus) {
    j["omnibus_k2"] = r.omnibus->statistic;
    j["p_omnibus"] = r.omnibus->p_value;
  } else {
    j["omnibus_k2"] = j["p_omnibus"] = nullptr;
  }
  return j;
}

namespace detail {

inline std::string fmt(const char* spec, double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string opt(const char* spec, const std::optional<double>& v) {
  return v ? fmt(spec, *v) : std::string("n/a");
}

inline std::string line2(const std::string& l1, const std::string& v1, const std::string& l2,
                         const std::string& v2) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-18s%20s   %-28s%11s\n", l1.c_str(), v1.c_str(), l2.c_str(), v2.c_str());
  return buf;
}

}  // namespace detail

/// Fixed-layout regression summary.
inline std::string ols_summary_text(const OlsOriginReport& r) {
  using detail::fmt;
  using detail::line2;
  const std::string rule(80, '=');
  const std::string thin(80, '-');
  std::string s;
  s += "                          OLS Regression Results (no constant)\n" + rule + "\n";
  s += line2("Dep. Variable:", r.dependent, "R-squared (uncentered):", fmt("%.3f", r.r2_uncentered));
  s += line2("Model:", "OLS", "Adj. R-squared (uncentered):", fmt("%.3f", r.adj_r2_uncentered));
  s += line2("Method:", "Least Squares", "F-statistic:", fmt("%.4g", r.f_stat));
  s += line2("No. Observations:", std::to_string(r.n_obs), "Prob (F-statistic):", fmt("%.3g", r.p_f));
  s += line2("Df Residuals:", std::to_string(r.df_resid), "Log-Likelihood:", fmt("%.1f", r.log_likelihood));
  s += line2("Df Model:", "1", "AIC:", fmt("%.4g", r.aic));
  s += line2("Covariance Type:", "nonrobust", "BIC:", fmt("%.4g", r.bic));
  s += rule + "\n";
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-12s%12s%12s%12s%10s%11s%11s\n", "", "coef", "std err", "t", "P>|t|",
                "[0.025", "0.975]");
  s += buf;
  s += thin + "\n";
  std::snprintf(buf, sizeof buf, "%-12s%12s%12s%12s%10s%11s%11s\n", r.regressor.c_str(),
                fmt("%.4f", r.hedge_ratio).c_str(), fmt("%.3f", r.se_beta).c_str(), fmt("%.3f", r.t_stat).c_str(),
                fmt("%.3f", r.p_t).c_str(), fmt("%.3f", r.ci_low).c_str(), fmt("%.3f", r.ci_high).c_str());
  s += buf;
  s += rule + "\n";
  const auto& jb = r.jarque_bera;
  const auto& om = r.omnibus;
  auto om_stat = om ? std::optional<double>(om->statistic) : std::nullopt;
  auto om_p = om ? std::optional<double>(om->p_value) : std::nullopt;
  auto jb_stat = jb ? std::optional<double>(jb->statistic) : std::nullopt;
  auto jb_p = jb ? std::optional<double>(jb->p_value) : std::nullopt;
  auto skew = jb ? std::optional<double>(jb->skew) : std::nullopt;
  auto kurt = jb ? std::optional<double>(jb->kurtosis) : std::nullopt;
  s += line2("Omnibus:", detail::opt("%.3f", om_stat), "Durbin-Watson:", detail::opt("%.3f", r.durbin_watson));
  s += line2("Prob(Omnibus):", detail::opt("%.3f", om_p), "Jarque-Bera (JB):", detail::opt("%.3f", jb_stat));
  s += line2("Skew:", detail::opt("%.3f", skew), "Prob(JB):", detail::opt("%.3g", jb_p));
  s += line2("Kurtosis:", detail::opt("%.3f", kurt), "Cond. No.", fmt("%.2f", r.cond_no));
  s += rule + "\n";
  s += "Notes:\n[1] R-squared is uncentered because the regression has no constant term.\n";
  if (r.exact_fit) s += "[2] Residuals are identically zero: the target is an exact multiple of the predictor.\n";
  return s;
}

inline std::string residuals_csv(const OlsOriginReport& r) {
  std::ostringstream out;
  out << "date,residual\n";
  for (std::size_t t = 0; t < r.residuals.size(); ++t) {
    out << (t < r.dates.size() ? r.dates[t].iso() : std::to_string(t)) << ',' << format_double(r.residuals[t])
        << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Trading frame, triggers, ledger
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& frame_header() {
  static const std::vector<std::string> h{"date",        "asset1",   "asset2",   "z_score",    "upper_limit",
                                          "lower_limit", "signals1", "signals2", "positions1", "positions2"};
  return h;
}

inline std::string frame_csv(const TradingFrame& f) {
  std::ostringstream out;
  for (std::size_t i = 0; i < frame_header().size(); ++i) out << (i ? "," : "") << frame_header()[i];
  out << '\n';
  for (const auto& r : f.rows) {
    out << r.date.iso() << ',' << format_double(r.asset1) << ',' << format_double(r.asset2) << ','
        << format_double(r.z_score) << ',' << format_double(r.upper_limit) << ',' << format_double(r.lower_limit)
        << ',' << r.signals1 << ',' << r.signals2 << ',' << r.positions1 << ',' << r.positions2 << '\n';
  }
  return out.str();
}

inline TradingFrame parse_frame_csv(std::string_view text, std::string asset1 = {}, std::string asset2 = {}) {
  const auto rows = detail::read_csv_rows(text);
  detail::expect_header(rows, frame_header(), "frame CSV");
  TradingFrame f;
  f.asset1 = std::move(asset1);
  f.asset2 = std::move(asset2);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& c = rows[i];
    if (c.size() != 10) throw Error(ErrorCode::MalformedRow, "frame CSV row " + std::to_string(i + 1));
    f.rows.push_back({Date::parse(c[0]), parse_number(c[1]), parse_number(c[2]), parse_number(c[3]),
                      parse_number(c[4]), parse_number(c[5]), parse_int(c[6]), parse_int(c[7]), parse_int(c[8]),
                      parse_int(c[9])});
  }
  return f;
}

inline json to_json(const std::vector<Trigger>& triggers) {
  json arr = json::array();
  for (const auto& t : triggers) {
    arr.push_back({{"date", t.date.iso()},
                   {"leg", std::string(to_string(t.leg))},
                   {"action", std::string(to_string(t.action))},
                   {"lots", t.lots}});
  }
  return arr;
}

inline std::string ledger_csv(const BacktestLedger& l) {
  std::ostringstream out;
  out << "date,cash1,cash2,holdings1,holdings2,total\n";
  for (const auto& r : l.rows) {
    out << r.date.iso() << ',' << r.cash1.str() << ',' << r.cash2.str() << ',' << r.holdings1.str() << ','
        << r.holdings2.str() << ',' << r.total.str() << '\n';
  }
  return out.str();
}

inline std::vector<LedgerRow> parse_ledger_csv(std::string_view text) {
  const auto rows = detail::read_csv_rows(text);
  detail::expect_header(rows, {"date", "cash1", "cash2", "holdings1", "holdings2", "total"}, "ledger CSV");
  std::vector<LedgerRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& c = rows[i];
    if (c.size() != 6) throw Error(ErrorCode::MalformedRow, "ledger CSV row " + std::to_string(i + 1));
    out.push_back({Date::parse(c[0]), Money::parse(c[1]), Money::parse(c[2]), Money::parse(c[3]),
                   Money::parse(c[4]), Money::parse(c[5])});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Summaries and sector tables
// ---------------------------------------------------------------------------

inline json to_json(const PairSummary& s) {
  return {{"sector", s.sector},
          {"asset1", s.asset1},
          {"asset2", s.asset2},
          {"stock_pair", s.pair_name()},
          {"init_investment", s.initial_investment.to_double()},
          {"profit", s.profit.to_double()},
          {"annual_return", s.annual_return()}};
}

inline PairSummary pair_summary_from_json(const json& j) {
  PairSummary s;
  s.sector = j.value("sector", "");
  s.asset1 = j.at("asset1").get<std::string>();
  s.asset2 = j.at("asset2").get<std::string>();
  s.initial_investment = Money::from_double(j.at("init_investment").get<double>());
  s.profit = Money::from_double(j.at("profit").get<double>());
  s.annual_return_hundredths = std::llround(j.at("annual_return").get<double>() * 100.0);
  return s;
}

inline std::string sector_table_csv(const SectorReport& r) {
  std::ostringstream out;
  out << "Stock Pair,Init Investment,Profit,Annual Return\n";
  for (const auto& s : r.rows) {
    out << s.pair_name() << ',' << s.initial_investment.str() << ',' << s.profit.str() << ','
        << format_hundredths(s.annual_return_hundredths) << '\n';
  }
  return out.str();
}

inline json to_json(const SectorReport& r) {
  json rows = json::array();
  for (const auto& s : r.rows) rows.push_back(to_json(s));
  return {{"sector", r.sector},
          {"rows", rows},
          {"n_pairs", r.n_pairs},
          {"n_positive", r.n_positive},
          {"max_return", static_cast<double>(r.max_return_hundredths) / 100.0}};
}

inline std::string sector_summary_csv(const std::vector<SectorReport>& reports) {
  std::ostringstream out;
  out << "Sector,No of Pairs,Positive Return Pairs,Max Ret\n";
  for (const auto& r : reports) {
    out << r.sector << ',' << r.n_pairs << ',' << r.n_positive << ',' << format_hundredths(r.max_return_hundredths)
        << '\n';
  }
  return out.str();
}

inline json sector_summary_json(const std::vector<SectorReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    arr.push_back({{"sector", r.sector},
                   {"n_pairs", r.n_pairs},
                   {"n_positive", r.n_positive},
                   {"max_return", static_cast<double>(r.max_return_hundredths) / 100.0}});
  }
  return arr;
}

}  // namespace pairtrade::io
