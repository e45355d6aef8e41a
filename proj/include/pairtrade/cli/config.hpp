#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pairtrade/date.hpp"
#include "pairtrade/error.hpp"
#include "pairtrade/marketdata.hpp"
#include "pairtrade/money.hpp"

namespace pairtrade::cli {

struct TickerSource {
  std::string ticker;
  std::filesystem::path csv;
};

struct RunConfig {
  std::map<std::string, std::vector<TickerSource>> sectors;
  Window train_window{Date(2018, 1, 1), Date(2020, 12, 31)};
  Window test_window{Date(2021, 1, 1), Date(2021, 12, 31)};
  double coint_threshold = 0.05;
  double near_eps = 0.02;
  double z_upper = 1.0;
  double z_lower = -1.0;
  Money capital_per_leg = Money::units(100'000);
  std::optional<std::size_t> max_lag;
  CsvOptions csv;
  std::filesystem::path output_dir = "out";

  void validate() const {
    auto fail = [](const std::string& m) { return Error(ErrorCode::Config, m); };
    if (train_window.end < train_window.start) throw fail("train window start after end");
    if (test_window.end < test_window.start) throw fail("test window start after end");
    if (!(train_window.end < test_window.start)) throw fail("train window must end before the test window begins");
    if (!(z_lower < 0.0 && 0.0 < z_upper)) throw fail("bands must satisfy z_lower < 0 < z_upper");
    if (!(coint_threshold > 0.0 && coint_threshold < 1.0)) throw fail("threshold must lie in (0, 1)");
    if (!(near_eps >= 0.0 && near_eps < 1.0)) throw fail("near_eps must lie in [0, 1)");
    if (capital_per_leg.micros() <= 0) throw fail("capital per leg must be positive");
  }

  [[nodiscard]] const std::vector<TickerSource>& sector(const std::string& name) const {
    auto it = sectors.find(name);
    if (it == sectors.end()) throw Error(ErrorCode::Config, "sector '" + name + "' not in configuration");
    return it->second;
  }

  /// Sector holding `ticker`; restricted to `only` when given.
  [[nodiscard]] std::pair<std::string, TickerSource> find_ticker(const std::string& ticker,
                                                                 const std::optional<std::string>& only = {}) const {
    for (const auto& [name, list] : sectors) {
      if (only && name != *only) continue;
      for (const auto& src : list) {
        if (src.ticker == ticker) return {name, src};
      }
    }
    throw Error(ErrorCode::Config, "ticker '" + ticker + "' not found in configuration" +
                                       (only ? " sector '" + *only + "'" : std::string()));
  }
};

namespace detail {

inline Window window_from_json(const nlohmann::json& j, Window fallback) {
  Window w = fallback;
  if (j.contains("start")) w.start = Date::parse(j.at("start").get<std::string>());
  if (j.contains("end")) w.end = Date::parse(j.at("end").get<std::string>());
  return w;
}

}  // namespace detail

/// Relative CSV paths are resolved against `base_dir`.
inline RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  RunConfig c;
  try {
    if (j.contains("sectors")) {
      for (const auto& [name, list] : j.at("sectors").items()) {
        auto& out = c.sectors[name];
        for (const auto& entry : list) {
          std::filesystem::path p = entry.at("csv").get<std::string>();
          if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
          out.push_back({entry.at("ticker").get<std::string>(), p});
        }
      }
    }
    if (j.contains("train_window")) c.train_window = detail::window_from_json(j.at("train_window"), c.train_window);
    if (j.contains("test_window")) c.test_window = detail::window_from_json(j.at("test_window"), c.test_window);
    c.coint_threshold = j.value("coint_threshold", c.coint_threshold);
    c.near_eps = j.value("near_eps", c.near_eps);
    c.z_upper = j.value("z_upper", c.z_upper);
    c.z_lower = j.value("z_lower", c.z_lower);
    if (j.contains("capital_per_leg")) c.capital_per_leg = Money::from_double(j.at("capital_per_leg").get<double>());
    if (j.contains("max_lag") && !j.at("max_lag").is_null()) c.max_lag = j.at("max_lag").get<std::size_t>();
    if (j.contains("close_columns")) c.csv.close_columns = j.at("close_columns").get<std::vector<std::string>>();
    if (j.contains("output_dir")) {
      std::filesystem::path out = j.at("output_dir").get<std::string>();
      c.output_dir = out.is_relative() && !base_dir.empty() ? base_dir / out : out;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("configuration: ") + e.what());
  }
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open configuration '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, "configuration '" + path.string() + "': " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

}  // namespace pairtrade::cli
