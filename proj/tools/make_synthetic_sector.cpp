// Writes a synthetic ten-ticker sector (weekday calendar, 740 training and 250
// test days) with exactly one engineered cointegrated pair:
//   DLTA = 400 * exp(random walk), HTEL = 0.5 * DLTA + AR(1) noise.
// The other eight tickers are independent geometric random walks. Seeds are
// tried in order until the scan finds no spurious pair and the engineered
// pair trades both bands during the test year; the seed used is recorded in
// the generated config.
//
// usage: make_synthetic_sector <output-dir> [first-seed]

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pairtrade/backtest.hpp"
#include "pairtrade/pairscan.hpp"
#include "pairtrade/signalgen.hpp"

namespace {

using namespace pairtrade;

constexpr std::size_t kTrainDays = 740;
constexpr std::size_t kTestDays = 250;
const std::vector<std::string> kTickers{"ALFA", "BRVO", "CHRL", "DLTA", "ECHO",
                                        "FXTR", "GOLF", "HTEL", "INDG", "JULT"};
constexpr std::size_t kPredictor = 3;  // DLTA
constexpr std::size_t kTarget = 7;     // HTEL

std::vector<Date> weekday_calendar(Date start, std::size_t n) {
  std::vector<Date> out;
  for (Date d = start; out.size() < n; d = d.plus_days(1)) {
    const unsigned wd = d.weekday();
    if (wd != 0 && wd != 6) out.push_back(d);
  }
  return out;
}

double cents(double v) { return std::round(v * 100.0) / 100.0; }

std::vector<std::vector<double>> simulate(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<std::vector<double>> cols(kTickers.size(), std::vector<double>(n));
  const double levels[] = {120.0, 850.0, 60.0, 400.0, 1500.0, 240.0, 75.0, 0.0, 2900.0, 35.0};
  for (std::size_t k = 0; k < kTickers.size(); ++k) {
    if (k == kTarget) continue;
    const double vol = k == kPredictor ? 0.010 : 0.015;
    double w = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      w += vol * z(rng);
      cols[k][t] = cents(levels[k] * std::exp(w));
    }
  }
  double u = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    u = 0.9 * u + 2.0 * z(rng);
    cols[kTarget][t] = cents(0.5 * cols[kPredictor][t] + u);
  }
  return cols;
}

bool acceptable(const std::vector<Date>& dates, const std::vector<std::vector<double>>& cols) {
  const Window train{dates.front(), dates[kTrainDays - 1]};
  const Window test{dates[kTrainDays], dates.back()};
  const AlignedPanel panel(kTickers, dates, cols);
  const AlignedPanel train_panel = slice_window(panel, train);
  const auto selected = select_pairs(coint_matrix(train_panel), 0.05, 0.02);
  if (selected.size() != 1 || selected[0].predictor != kTickers[kPredictor] ||
      selected[0].target != kTickers[kTarget] || selected[0].near_threshold) {
    return false;
  }
  const PriceSeries a1 = panel.series(kPredictor);
  const PriceSeries a2 = panel.series(kTarget);
  const RatioStats stats = fit_ratio_stats(ratio_series(a1, a2), train);
  const TradingFrame frame = build_frame(a1, a2, stats, test);
  int longs = 0;
  int shorts = 0;
  for (const auto& t : extract_triggers(frame)) {
    if (t.leg != Leg::Asset1) continue;
    longs += t.action == TriggerAction::OpenLong || t.action == TriggerAction::FlipToLong;
    shorts += t.action == TriggerAction::OpenShort || t.action == TriggerAction::FlipToShort;
  }
  const BacktestConfig bc{Money::units(100'000), test};
  const PairSummary summary = summarize_pair(run_ledger(frame, bc), bc);
  return longs >= 1 && shorts >= 1 && summary.profit.micros() > 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_synthetic_sector <output-dir> [first-seed]\n";
    return 1;
  }
  const std::filesystem::path out_dir = argv[1];
  std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 20180101;
  const auto dates = weekday_calendar(Date(2018, 1, 1), kTrainDays + kTestDays);

  std::vector<std::vector<double>> cols;
  for (int attempts = 0;; ++seed, ++attempts) {
    if (attempts > 1000) {
      std::cerr << "no acceptable seed found\n";
      return 2;
    }
    cols = simulate(seed, dates.size());
    if (acceptable(dates, cols)) break;
  }

  std::filesystem::create_directories(out_dir);
  nlohmann::json tickers = nlohmann::json::array();
  for (std::size_t k = 0; k < kTickers.size(); ++k) {
    std::ofstream csv(out_dir / (kTickers[k] + ".csv"));
    csv << "Date,Open,High,Low,Close,Adj Close,Volume\n";
    for (std::size_t t = 0; t < dates.size(); ++t) {
      const double close = cols[k][t];
      const double open = t ? cols[k][t - 1] : close;
      char line[160];
      std::snprintf(line, sizeof line, "%s,%.2f,%.2f,%.2f,%.2f,%.2f,%d\n", dates[t].iso().c_str(), open,
                    std::max(open, close), std::min(open, close), close, close, 100000 + static_cast<int>(t % 97) * 113);
      csv << line;
    }
    tickers.push_back({{"ticker", kTickers[k]}, {"csv", kTickers[k] + ".csv"}});
  }
  const nlohmann::json config = {
      {"generator_seed", seed},
      {"sectors", {{"synthetic", tickers}}},
      {"train_window", {{"start", dates.front().iso()}, {"end", dates[kTrainDays - 1].iso()}}},
      {"test_window", {{"start", dates[kTrainDays].iso()}, {"end", dates.back().iso()}}},
      {"coint_threshold", 0.05},
      {"near_eps", 0.02},
      {"z_upper", 1.0},
      {"z_lower", -1.0},
      {"capital_per_leg", 100000}};
  std::ofstream(out_dir / "config.json") << config.dump(2) << "\n";
  std::cout << "seed " << seed << ": wrote " << kTickers.size() << " tickers to " << out_dir.string() << "\n";
  return 0;
}
