#pragma once

// Pipeline orchestration behind the `pairtrade` command-line tool. Every
// command writes its artifacts into a fresh directory that is renamed into
// place once complete.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pairtrade/backtest.hpp"
#include "pairtrade/cli/config.hpp"
#include "pairtrade/cli/svg.hpp"
#include "pairtrade/econometrics.hpp"
#include "pairtrade/marketdata.hpp"
#include "pairtrade/pairscan.hpp"
#include "pairtrade/serialize.hpp"
#include "pairtrade/signalgen.hpp"

namespace pairtrade::cli {

namespace fs = std::filesystem;

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

inline int exit_code_for(const Error& e) {
  if (e.code() == ErrorCode::Config) return kUsage;
  return is_numeric(e.code()) ? kNumeric : kData;
}

/// Staging directory renamed onto `target` by commit().
class StagedDir {
 public:
  explicit StagedDir(fs::path target) : target_(std::move(target)) {
    staging_ = target_;
    staging_ += ".tmp-" + std::to_string(::getpid());
    fs::remove_all(staging_);
    fs::create_directories(staging_);
  }
  StagedDir(const StagedDir&) = delete;
  StagedDir& operator=(const StagedDir&) = delete;
  ~StagedDir() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(staging_, ec);
    }
  }

  void write(const std::string& name, const std::string& content) const {
    std::ofstream out(staging_ / name, std::ios::binary);
    out << content;
    if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + (staging_ / name).string());
  }
  void write_json(const std::string& name, const nlohmann::json& j) const { write(name, j.dump(2) + "\n"); }

  void commit() {
    fs::remove_all(target_);
    fs::rename(staging_, target_);
    committed_ = true;
  }
  [[nodiscard]] const fs::path& target() const noexcept { return target_; }

 private:
  fs::path target_;
  fs::path staging_;
  bool committed_ = false;
};

inline std::vector<PriceSeries> load_sector(const RunConfig& config, const std::string& sector) {
  const auto& sources = config.sector(sector);
  if (sources.size() < 2) {
    throw Error(ErrorCode::Config, "sector '" + sector + "' needs at least two tickers");
  }
  std::vector<PriceSeries> out;
  for (const auto& src : sources) out.push_back(load_csv(src.csv.string(), src.ticker, config.csv));
  return out;
}

inline std::vector<SelectedPair> scan_sector(const RunConfig& config, const std::string& sector,
                                             const std::optional<StagedDir*>& sink, std::ostream& log) {
  const auto series = load_sector(config, sector);
  const AlignedPanel panel = slice_window(align_panel(series), config.train_window);
  const CorrelationMatrix corr = correlation_matrix(panel);
  const PValueMatrix pm = coint_matrix(panel, config.max_lag);
  const auto pairs = select_pairs(pm, config.coint_threshold, config.near_eps);
  log << sector << ": " << pm.populated() << " pairs tested over " << panel.num_dates() << " training days, "
      << pairs.size() << " selected\n";
  if (sink) {
    StagedDir& dir = **sink;
    dir.write("correlation.csv", io::correlation_csv(corr));
    dir.write_json("correlation.json", io::to_json(corr));
    dir.write("pvalues.csv", io::pvalue_csv(pm));
    dir.write_json("pvalues.json", io::to_json(pm));
    dir.write_json("selected_pairs.json", {{"sector", sector},
                                           {"threshold", config.coint_threshold},
                                           {"near_eps", config.near_eps},
                                           {"pairs", io::to_json(pairs)}});
  }
  return pairs;
}

inline int cmd_scan(const RunConfig& config, const std::string& sector, std::ostream& log) {
  StagedDir dir(config.output_dir / "scan" / sector);
  scan_sector(config, sector, &dir, log);
  dir.commit();
  log << "wrote " << dir.target().string() << "\n";
  return kOk;
}

struct LoadedPair {
  std::string sector;
  PriceSeries asset1;  // predictor: higher mean close over the training window
  PriceSeries asset2;
};

inline LoadedPair load_pair(const RunConfig& config, const std::string& a, const std::string& b,
                            const std::optional<std::string>& sector) {
  if (a == b) throw Error(ErrorCode::Config, "pair needs two distinct tickers");
  const auto [sector_a, src_a] = config.find_ticker(a, sector);
  const auto [sector_b, src_b] = config.find_ticker(b, sector ? sector : std::optional<std::string>(sector_a));
  const PriceSeries sa = load_csv(src_a.csv.string(), a, config.csv);
  const PriceSeries sb = load_csv(src_b.csv.string(), b, config.csv);
  const AlignedPanel train = slice_window(align_panel({sa, sb}), config.train_window);
  const PriceSeries ta = train.series(0);
  const PriceSeries tb = train.series(1);
  const auto [first, second] = order_pair(ta, tb);
  const bool a_first = first->ticker() == a;
  return {sector_a, a_first ? sa : sb, a_first ? sb : sa};
}

inline std::string pair_dir_name(const std::string& a1, const std::string& a2) { return a1 + "_" + a2; }

inline int cmd_analyze(const RunConfig& config, const std::string& a, const std::string& b,
                       const std::optional<std::string>& sector, std::ostream& log) {
  const LoadedPair pair = load_pair(config, a, b, sector);
  const PairModel model = fit_pair(pair.asset1, pair.asset2, config.train_window);
  StagedDir dir(config.output_dir / "analyze" / pair_dir_name(pair.asset1.ticker(), pair.asset2.ticker()));
  dir.write("ols_summary.txt", io::ols_summary_text(model.ols));
  dir.write_json("ols.json", io::to_json(model.ols));
  dir.write("residuals.csv", io::residuals_csv(model.ols));
  nlohmann::json adf = {{"asset1", model.pair.predictor},
                        {"asset2", model.pair.target},
                        {"verdict", std::string(to_string(model.verdict))},
                        {"adf", model.residual_adf ? io::to_json(*model.residual_adf) : nlohmann::json(nullptr)}};
  dir.write_json("residual_adf.json", adf);
  dir.commit();
  log << model.pair.predictor << " -> " << model.pair.target << ": hedge ratio " << model.hedge_ratio()
      << ", residuals " << to_string(model.verdict) << "\n";
  return kOk;
}

struct PairBacktest {
  TradingFrame frame;
  BacktestLedger ledger;
  PairSummary summary;
  RatioStats stats;
};

inline PairBacktest backtest_pair(const RunConfig& config, const LoadedPair& pair) {
  const AlignedPanel all = align_panel({pair.asset1, pair.asset2});
  const RatioSeries ratio = ratio_series(all.series(0), all.series(1));
  PairBacktest bt;
  bt.stats = fit_ratio_stats(ratio, config.train_window);
  bt.frame = build_frame(pair.asset1, pair.asset2, bt.stats, config.test_window, {config.z_upper, config.z_lower});
  const BacktestConfig bc{config.capital_per_leg, config.test_window};
  bt.ledger = run_ledger(bt.frame, bc);
  bt.summary = summarize_pair(bt.ledger, bc, pair.sector);
  return bt;
}

inline void write_backtest(const RunConfig& config, const PairBacktest& bt, bool svg, std::ostream& log) {
  StagedDir dir(config.output_dir / "backtest" / pair_dir_name(bt.frame.asset1, bt.frame.asset2));
  dir.write("frame.csv", io::frame_csv(bt.frame));
  dir.write_json("triggers.json", io::to_json(bt.ledger.triggers));
  dir.write("ledger.csv", io::ledger_csv(bt.ledger));
  nlohmann::json summary = io::to_json(bt.summary);
  summary["shares1"] = bt.ledger.shares1;
  summary["shares2"] = bt.ledger.shares2;
  summary["ratio_mean"] = bt.stats.mean;
  summary["ratio_std"] = bt.stats.stddev;
  summary["final_value"] = bt.ledger.rows.back().total.to_double();
  summary["n_triggers"] = bt.ledger.triggers.size();
  dir.write_json("summary.json", summary);
  if (svg) {
    std::vector<SvgSeries> z{{"z-score", "#1f77b4", {}}, {"upper", "#d62728", {}}, {"lower", "#2ca02c", {}}};
    for (const auto& r : bt.frame.rows) {
      z[0].values.push_back(r.z_score);
      z[1].values.push_back(r.upper_limit);
      z[2].values.push_back(r.lower_limit);
    }
    dir.write("zscore.svg", svg_line_chart(bt.frame.asset1 + "/" + bt.frame.asset2 + " ratio z-score", z));
    std::vector<SvgSeries> v{{"total value", "#1f77b4", {}}};
    for (const auto& r : bt.ledger.rows) v[0].values.push_back(r.total.to_double());
    dir.write("portfolio.svg", svg_line_chart(bt.frame.asset1 + "/" + bt.frame.asset2 + " portfolio value", v));
  }
  dir.commit();
  log << bt.summary.pair_name() << ": profit " << bt.summary.profit.str() << ", return "
      << format_hundredths(bt.summary.annual_return_hundredths) << "%, " << bt.ledger.triggers.size()
      << " triggers\n";
}

/// Backtests one pair, or every selected pair of `sector` when no pair is given.
inline int cmd_backtest(const RunConfig& config, const std::optional<std::pair<std::string, std::string>>& pair,
                        const std::optional<std::string>& sector, bool svg, std::ostream& log) {
  if (pair) {
    write_backtest(config, backtest_pair(config, load_pair(config, pair->first, pair->second, sector)), svg, log);
    return kOk;
  }
  if (!sector) throw Error(ErrorCode::Config, "backtest needs --pair or --sector");
  const auto selected = scan_sector(config, *sector, std::nullopt, log);
  for (const auto& p : selected) {
    write_backtest(config, backtest_pair(config, load_pair(config, p.predictor, p.target, sector)), svg, log);
  }
  return kOk;
}

/// Collects every backtest summary under `root/backtest`.
inline std::vector<PairSummary> collect_summaries(const fs::path& root) {
  std::vector<PairSummary> out;
  const fs::path dir = root / "backtest";
  if (!fs::is_directory(dir)) return out;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path f = entry.path() / "summary.json";
    if (entry.is_directory() && fs::is_regular_file(f) && entry.path().filename().string().find(".tmp-") ==
                                                              std::string::npos) {
      files.push_back(f);
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f);
    try {
      out.push_back(io::pair_summary_from_json(nlohmann::json::parse(in)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedRow, f.string() + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<SectorReport> build_reports(const std::vector<PairSummary>& summaries) {
  std::map<std::string, std::vector<PairSummary>> by_sector;
  for (const auto& s : summaries) by_sector[s.sector.empty() ? "unassigned" : s.sector].push_back(s);
  std::vector<SectorReport> reports;
  for (auto& [name, rows] : by_sector) reports.push_back(sector_report(std::move(rows), name));
  std::sort(reports.begin(), reports.end(), [](const SectorReport& a, const SectorReport& b) {
    if (a.max_return_hundredths != b.max_return_hundredths) return a.max_return_hundredths > b.max_return_hundredths;
    return a.sector < b.sector;
  });
  return reports;
}

inline int cmd_report(const fs::path& output_dir, std::ostream& log) {
  const auto summaries = collect_summaries(output_dir);
  if (summaries.empty()) {
    throw Error(ErrorCode::EmptyList, "no backtest summaries under " + (output_dir / "backtest").string());
  }
  const auto reports = build_reports(summaries);
  StagedDir dir(output_dir / "report");
  for (const auto& r : reports) {
    dir.write(r.sector + ".csv", io::sector_table_csv(r));
    dir.write_json(r.sector + ".json", io::to_json(r));
  }
  dir.write("summary.csv", io::sector_summary_csv(reports));
  dir.write_json("summary.json", io::sector_summary_json(reports));
  dir.commit();
  log << io::sector_summary_csv(reports);
  return kOk;
}

}  // namespace pairtrade::cli
