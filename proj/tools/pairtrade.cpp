// pairtrade: cointegration pair scanning, pair analysis, backtesting and
// sector reporting over daily close-price CSV files.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pairtrade/cli/commands.hpp"

namespace {

using pairtrade::Date;
using pairtrade::Error;
using pairtrade::ErrorCode;
namespace cli = pairtrade::cli;

struct Options {
  std::string config;
  std::string sector;
  std::string pair;
  std::string train_start, train_end, test_start, test_end;
  std::optional<double> threshold;
  std::optional<double> near_eps;
  std::optional<double> capital;
  std::string out;
  bool svg = false;
};

std::pair<std::string, std::string> split_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 == text.size()) {
    throw Error(ErrorCode::Config, "--pair expects A,B");
  }
  return {text.substr(0, comma), text.substr(comma + 1)};
}

Date flag_date(const char* flag, const std::string& text) {
  try {
    return Date::parse(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, std::string(flag) + ": " + e.what());
  }
}

cli::RunConfig resolve_config(const Options& o, bool require_file) {
  cli::RunConfig config;
  if (!o.config.empty()) {
    config = cli::load_config(o.config);
  } else if (require_file) {
    throw Error(ErrorCode::Config, "--config is required");
  }
  if (!o.train_start.empty()) config.train_window.start = flag_date("--train-start", o.train_start);
  if (!o.train_end.empty()) config.train_window.end = flag_date("--train-end", o.train_end);
  if (!o.test_start.empty()) config.test_window.start = flag_date("--test-start", o.test_start);
  if (!o.test_end.empty()) config.test_window.end = flag_date("--test-end", o.test_end);
  if (o.threshold) config.coint_threshold = *o.threshold;
  if (o.near_eps) config.near_eps = *o.near_eps;
  if (o.capital) config.capital_per_leg = pairtrade::Money::from_double(*o.capital);
  if (!o.out.empty()) {
    config.output_dir = o.out;
  } else if (const char* env = std::getenv("PAIRTRADE_OUT"); env && *env) {
    config.output_dir = env;
  }
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cointegration-based pair trading toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration");
    sub->add_option("--out", o.out, "output directory (overrides PAIRTRADE_OUT and the config)");
    sub->add_option("--train-start", o.train_start, "training window start (YYYY-MM-DD)");
    sub->add_option("--train-end", o.train_end, "training window end (YYYY-MM-DD)");
    sub->add_option("--test-start", o.test_start, "test window start (YYYY-MM-DD)");
    sub->add_option("--test-end", o.test_end, "test window end (YYYY-MM-DD)");
    sub->add_option("--threshold", o.threshold, "cointegration p-value threshold");
    sub->add_option("--near-eps", o.near_eps, "near-threshold inclusion margin");
    sub->add_option("--capital", o.capital, "initial capital per leg");
  };

  auto* scan = app.add_subcommand("scan", "correlation and cointegration scan of a sector");
  add_common(scan);
  scan->add_option("--sector", o.sector, "sector name")->required();

  auto* analyze = app.add_subcommand("analyze", "hedge regression and residual unit-root test for a pair");
  add_common(analyze);
  analyze->add_option("--pair", o.pair, "tickers A,B")->required();
  analyze->add_option("--sector", o.sector, "restrict ticker lookup to a sector");

  auto* backtest = app.add_subcommand("backtest", "signal generation and ledger backtest");
  add_common(backtest);
  backtest->add_option("--pair", o.pair, "tickers A,B (default: every selected pair of --sector)");
  backtest->add_option("--sector", o.sector, "sector name");
  backtest->add_flag("--svg", o.svg, "also write SVG line charts");

  auto* report = app.add_subcommand("report", "sector tables from completed backtests");
  add_common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kUsage;
  }

  const auto sector = o.sector.empty() ? std::nullopt : std::optional<std::string>(o.sector);
  try {
    if (scan->parsed()) return cli::cmd_scan(resolve_config(o, true), o.sector, std::cout);
    if (analyze->parsed()) {
      const auto [a, b] = split_pair(o.pair);
      return cli::cmd_analyze(resolve_config(o, true), a, b, sector, std::cout);
    }
    if (backtest->parsed()) {
      std::optional<std::pair<std::string, std::string>> pair;
      if (!o.pair.empty()) pair = split_pair(o.pair);
      return cli::cmd_backtest(resolve_config(o, true), pair, sector, o.svg, std::cout);
    }
    if (report->parsed()) return cli::cmd_report(resolve_config(o, false).output_dir, std::cout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kData;
  }
  return cli::kUsage;
}
