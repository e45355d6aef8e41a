#pragma once

// MacKinnon response surfaces for Dickey-Fuller critical values and
// asymptotic p-values. The coefficient table is data: the text below is a
// verbatim copy of data/mackinnon_coefficients.txt (a unit test keeps the two
// in sync), and alternative tables can be loaded with MacKinnonTables::parse.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "pairtrade/distributions.hpp"
#include "pairtrade/error.hpp"

namespace pairtrade {

enum class Deterministic { None, Constant };

inline constexpr std::string_view to_string(Deterministic d) noexcept {
  return d == Deterministic::None ? "none" : "constant";
}

enum class Level { P1, P5, P10 };

inline constexpr std::array<Level, 3> kLevels{Level::P1, Level::P5, Level::P10};

inline constexpr double to_probability(Level l) noexcept {
  switch (l) {
    case Level::P1: return 0.01;
    case Level::P5: return 0.05;
    case Level::P10: return 0.10;
  }
  return 0.0;
}

inline constexpr std::string_view to_string(Level l) noexcept {
  switch (l) {
    case Level::P1: return "1%";
    case Level::P5: return "5%";
    case Level::P10: return "10%";
  }
  return "?";
}

inline constexpr std::string_view kMackinnonCoefficients = R"MKN(# Unit-root / cointegration response-surface coefficients.
# format-version 1
#
# Critical values (MacKinnon 2010, "Critical Values for Cointegration Tests",
# Queen's Economics Department Working Paper 1227, Table 2):
#   crit <N> <deterministic> <level> <b_inf> <b1> <b2> <b3>
#   crit(T) = b_inf + b1/T + b2/T^2 + b3/T^3
#
# Asymptotic p-values (MacKinnon 1994, "Approximate Asymptotic Distribution
# Functions for Unit-Root and Cointegration Tests", JBES 12(2), Tables 3-4;
# coefficients as distributed with statsmodels' adfvalues, higher-order terms
# already rescaled):
#   pval_small <N> <deterministic> <c0> <c1> <c2>         used for tau <= tau_star
#   pval_large <N> <deterministic> <c0> <c1> <c2> <c3>    used for tau >  tau_star
#   pval_bounds <N> <deterministic> <tau_min> <tau_star> <tau_max>
#   p(tau) = Phi(c0 + c1 tau + c2 tau^2 [+ c3 tau^3]); 0 below tau_min, 1 above tau_max
#
# N = number of series in the (cointegrating) regression.

crit 1 none     0.01  -2.56574   -2.2358    -3.627     0.0
crit 1 none     0.05  -1.94100   -0.2686    -3.365    31.223
crit 1 none     0.10  -1.61682    0.2656    -2.714    25.364
crit 1 constant 0.01  -3.43035   -6.5393   -16.786   -79.433
crit 1 constant 0.05  -2.86154   -2.8903    -4.234   -40.040
crit 1 constant 0.10  -2.56677   -1.5384    -2.809     0.0
crit 2 constant 0.01  -3.89644  -10.9519   -33.527     0.0
crit 2 constant 0.05  -3.33613   -6.1101    -6.823     0.0
crit 2 constant 0.10  -3.04445   -4.2412    -2.720     0.0

pval_small  1 none      0.6344   1.2378   0.032496
pval_large  1 none      0.4797   0.93557 -0.06999   0.033066
pval_bounds 1 none    -19.04    -1.04     inf

pval_small  1 constant  2.1659   1.4412   0.038269
pval_large  1 constant  1.7339   0.93202 -0.12745  -0.010368
pval_bounds 1 constant -18.83   -1.61     2.74

pval_small  2 constant  2.92     1.5012   0.039796
pval_large  2 constant  2.1945   0.64695 -0.29198  -0.042377
pval_bounds 2 constant -18.86   -2.62     0.92
)MKN";

class MacKinnonTables {
 public:
  struct CritCoeffs {
    double b_inf, b1, b2, b3;
  };
  struct PValueCoeffs {
    std::array<double, 3> small{};
    std::array<double, 4> large{};
    double tau_min = 0.0;
    double tau_star = 0.0;
    double tau_max = 0.0;
    bool has_small = false, has_large = false, has_bounds = false;
  };
  using SurfaceKey = std::pair<int, Deterministic>;

  static MacKinnonTables parse(std::string_view text) {
    MacKinnonTables t;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream row(line);
      std::vector<std::string> tok;
      for (std::string s; row >> s;) tok.push_back(s);
      if (tok.empty()) continue;
      auto fail = [&](const std::string& why) {
        return Error(ErrorCode::MalformedRow, "coefficient table line " + std::to_string(lineno) + ": " + why);
      };
      auto num = [&](const std::string& s) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) throw fail("bad number '" + s + "'");
        return v;
      };
      auto expect = [&](std::size_t n) {
        if (tok.size() != n) throw fail("expected " + std::to_string(n) + " fields");
      };
      if (tok.size() < 3) throw fail("too few fields");
      const int n_series = static_cast<int>(num(tok[1]));
      Deterministic det;
      if (tok[2] == "none") det = Deterministic::None;
      else if (tok[2] == "constant") det = Deterministic::Constant;
      else throw fail("unknown deterministic '" + tok[2] + "'");
      const SurfaceKey key{n_series, det};

      if (tok[0] == "crit") {
        expect(8);
        const double p = num(tok[3]);
        Level level;
        if (p == 0.01) level = Level::P1;
        else if (p == 0.05) level = Level::P5;
        else if (p == 0.10) level = Level::P10;
        else throw fail("unknown level");
        t.crit_[{n_series, det, level}] = {num(tok[4]), num(tok[5]), num(tok[6]), num(tok[7])};
      } else if (tok[0] == "pval_small") {
        expect(6);
        auto& pv = t.pval_[key];
        pv.small = {num(tok[3]), num(tok[4]), num(tok[5])};
        pv.has_small = true;
      } else if (tok[0] == "pval_large") {
        expect(7);
        auto& pv = t.pval_[key];
        pv.large = {num(tok[3]), num(tok[4]), num(tok[5]), num(tok[6])};
        pv.has_large = true;
      } else if (tok[0] == "pval_bounds") {
        expect(6);
        auto& pv = t.pval_[key];
        pv.tau_min = num(tok[3]);
        pv.tau_star = num(tok[4]);
        pv.tau_max = num(tok[5]);
        pv.has_bounds = true;
      } else {
        throw fail("unknown row kind '" + tok[0] + "'");
      }
    }
    for (const auto& [key, pv] : t.pval_) {
      if (!pv.has_small || !pv.has_large || !pv.has_bounds) {
        throw Error(ErrorCode::MalformedRow, "incomplete p-value surface for N=" + std::to_string(key.first));
      }
    }
    return t;
  }

  /// Built-in table, parsed once.
  static const MacKinnonTables& builtin() {
    static const MacKinnonTables tables = parse(kMackinnonCoefficients);
    return tables;
  }

  [[nodiscard]] const CritCoeffs& crit_coeffs(int n_series, Deterministic det, Level level) const {
    auto it = crit_.find({n_series, det, level});
    if (it == crit_.end()) {
      throw Error(ErrorCode::UnknownSurface, "no critical-value surface for N=" + std::to_string(n_series) +
                                                 ", " + std::string(to_string(det)) + ", " +
                                                 std::string(to_string(level)));
    }
    return it->second;
  }

  [[nodiscard]] const PValueCoeffs& pvalue_coeffs(int n_series, Deterministic det) const {
    auto it = pval_.find({n_series, det});
    if (it == pval_.end()) {
      throw Error(ErrorCode::UnknownSurface, "no p-value surface for N=" + std::to_string(n_series) + ", " +
                                                 std::string(to_string(det)));
    }
    return it->second;
  }

  /// Surfaces with both critical values and p-values.
  [[nodiscard]] std::vector<SurfaceKey> surfaces() const {
    std::vector<SurfaceKey> out;
    for (const auto& [key, pv] : pval_) {
      if (crit_.contains({key.first, key.second, Level::P1})) out.push_back(key);
    }
    return out;
  }

  /// b_inf + b1/T + b2/T^2 + b3/T^3.
  [[nodiscard]] double crit(int n_series, Deterministic det, Level level, double sample_size) const {
    const auto& c = crit_coeffs(n_series, det, level);
    if (!(sample_size >= 20.0)) {
      throw Error(ErrorCode::SampleTooSmall, "critical-value surface needs T >= 20");
    }
    if (std::isinf(sample_size)) return c.b_inf;
    const double inv = 1.0 / sample_size;
    return c.b_inf + inv * (c.b1 + inv * (c.b2 + inv * c.b3));
  }

  [[nodiscard]] double pvalue(double tau, int n_series, Deterministic det) const {
    const auto& c = pvalue_coeffs(n_series, det);
    if (std::isnan(tau)) return tau;
    if (tau > c.tau_max) return 1.0;
    if (tau < c.tau_min) return 0.0;
    double z = 0.0;
    if (tau <= c.tau_star) {
      z = c.small[0] + tau * (c.small[1] + tau * c.small[2]);
    } else {
      z = c.large[0] + tau * (c.large[1] + tau * (c.large[2] + tau * c.large[3]));
    }
    return std::clamp(dist::normal_cdf(z), 0.0, 1.0);
  }

 private:
  std::map<std::tuple<int, Deterministic, Level>, CritCoeffs> crit_;
  std::map<SurfaceKey, PValueCoeffs> pval_;
};

/// Response-surface critical value at effective sample size `sample_size`.
inline double mackinnon_crit(int n_series, Deterministic det, Level level, double sample_size) {
  return MacKinnonTables::builtin().crit(n_series, det, level, sample_size);
}

inline double mackinnon_pvalue(double tau, int n_series, Deterministic det) {
  return MacKinnonTables::builtin().pvalue(tau, n_series, det);
}

}  // namespace pairtrade
