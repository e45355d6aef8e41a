#include <map>
#include <random>

#include <gtest/gtest.h>

#include "pairtrade/backtest.hpp"
#include "support.hpp"

using namespace pairtrade;

namespace {

const BacktestConfig kConfig{};

BacktestLedger five_day_ledger() {
  const auto f = testing_support::frame_from_signals({10, 10, 12, 11, 10}, {10, 10, 9, 10, 10}, {0, -1, -1, 0, 0});
  return run_ledger(f, kConfig);
}

}  // namespace

TEST(SizeShares, Examples) {
  EXPECT_EQ(size_shares(Money::units(100'000), 10), 10'000);
  EXPECT_EQ(size_shares(Money::units(100'000), 30'000), 3);
  EXPECT_EQ(size_shares(Money::units(100'000), 33.33), 3000);
  try {
    (void)size_shares(Money::units(100'000), 150'000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PriceExceedsCapital);
  }
  EXPECT_THROW((void)size_shares(Money::units(100'000), 0.0), Error);
}

TEST(RunLedger, FiveDayFixture) {
  const auto l = five_day_ledger();
  EXPECT_EQ(l.shares1, 10'000);
  EXPECT_EQ(l.shares2, 10'000);
  const std::int64_t want[] = {200'000, 200'000, 170'000, 190'000, 190'000};
  ASSERT_EQ(l.rows.size(), 5u);
  for (std::size_t t = 0; t < 5; ++t) EXPECT_EQ(l.rows[t].total, Money::units(want[t])) << "day " << t;
  EXPECT_EQ(l.rows[1].cash1, Money::units(200'000));
  EXPECT_EQ(l.rows[1].cash2, Money::units(0));
  EXPECT_EQ(l.rows[1].holdings1, Money::units(-100'000));
  EXPECT_EQ(l.rows[3].holdings1, Money::units(0));
  const auto s = summarize_pair(l, kConfig);
  EXPECT_EQ(s.profit, Money::units(-10'000));
  EXPECT_EQ(s.annual_return_hundredths, -500);
  EXPECT_EQ(format_hundredths(s.annual_return_hundredths), "-5.00");
  EXPECT_EQ(s.initial_investment, Money::units(200'000));
}

TEST(RunLedger, NoExposureKeepsCapital) {
  const auto f = testing_support::frame_from_signals({10, 12, 8, 15}, {20, 19, 25, 22}, {0, 0, 0, 0});
  const auto l = run_ledger(f, kConfig);
  for (const auto& r : l.rows) EXPECT_EQ(r.total, Money::units(200'000));
  EXPECT_TRUE(l.triggers.empty());
  EXPECT_EQ(summarize_pair(l, kConfig).annual_return_hundredths, 0);
}

TEST(RunLedger, Errors) {
  EXPECT_THROW((void)run_ledger(TradingFrame{}, kConfig), Error);
  auto f = testing_support::frame_from_signals({10, 10}, {10, 10}, {0, 1});
  f.rows[1].positions2 = 0;
  EXPECT_THROW((void)run_ledger(f, kConfig), Error);
  const auto ok = testing_support::frame_from_signals({10, 10}, {10, 10}, {0, 1});
  EXPECT_THROW((void)run_ledger(ok, BacktestConfig{Money::units(0), {}}), Error);
}

TEST(RunLedger, RandomisedAccountingMatchesTriggerReplay) {
  std::mt19937_64 rng(8080);
  std::uniform_int_distribution<int> cents(100, 500'000);
  std::uniform_int_distribution<int> len(1, 120);
  std::uniform_int_distribution<int> sig(-1, 1);
  std::bernoulli_distribution change(0.25);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = static_cast<std::size_t>(len(rng));
    std::vector<double> c1(n), c2(n);
    std::vector<int> s(n);
    int cur = 0;
    for (std::size_t t = 0; t < n; ++t) {
      c1[t] = cents(rng) / 100.0;
      c2[t] = cents(rng) / 100.0;
      if (change(rng)) cur = sig(rng);
      s[t] = cur;
    }
    const auto f = testing_support::frame_from_signals(c1, c2, s);
    const auto l = run_ledger(f, kConfig);
    const auto replay = testing_support::replay_triggers(f, l.triggers, kConfig.capital_per_leg.micros());
    std::int64_t cum1 = 0, cum2 = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const auto& r = l.rows[t];
      EXPECT_EQ(r.total, r.cash1 + r.cash2 + r.holdings1 + r.holdings2);
      EXPECT_EQ(r.cash1.micros(), replay[t].cash1);
      EXPECT_EQ(r.cash2.micros(), replay[t].cash2);
      EXPECT_EQ(r.total.micros(), replay[t].total);
      const std::int64_t p1 = Money::from_double(c1[t]).micros();
      const std::int64_t p2 = Money::from_double(c2[t]).micros();
      cum1 += f.rows[t].positions1 * l.shares1 * p1;
      cum2 += f.rows[t].positions2 * l.shares2 * p2;
      EXPECT_EQ(r.cash1.micros(), kConfig.capital_per_leg.micros() - cum1);
      EXPECT_EQ(r.cash2.micros(), kConfig.capital_per_leg.micros() - cum2);
      EXPECT_EQ(r.holdings1.micros(), f.rows[t].signals1 * l.shares1 * p1);
      EXPECT_EQ(r.holdings2.micros(), f.rows[t].signals2 * l.shares2 * p2);
      if (t > 0 && f.rows[t].positions1 == 0 && c1[t] == c1[t - 1] && c2[t] == c2[t - 1]) {
        EXPECT_EQ(r.total, l.rows[t - 1].total);
      }
    }
  }
}

TEST(RunLedger, FlatAtEndRealisesClosedTradePnl) {
  // Long asset1 at 10, closed at 13; asset2 short at 20, covered at 18.
  const auto f = testing_support::frame_from_signals({10, 10, 13, 12}, {20, 20, 18, 30}, {0, 1, 0, 0});
  const auto l = run_ledger(f, kConfig);
  const auto& last = l.rows.back();
  EXPECT_EQ(last.holdings1, Money::units(0));
  EXPECT_EQ(last.holdings2, Money::units(0));
  EXPECT_EQ(last.cash1 - kConfig.capital_per_leg, Money::units(3).times(l.shares1));
  EXPECT_EQ(last.cash2 - kConfig.capital_per_leg, Money::units(2).times(l.shares2));
}

TEST(ReturnHundredths, RoundsHalfAwayFromZero) {
  const Money init = Money::units(200'000);
  EXPECT_EQ(return_hundredths(Money::units(35'269), init), 1763);
  EXPECT_EQ(return_hundredths(Money::units(27'773), init), 1389);
  EXPECT_EQ(return_hundredths(Money::units(0), init), 0);
  EXPECT_EQ(return_hundredths(Money::units(10), init), 1);    // 0.005 -> 0.01
  EXPECT_EQ(return_hundredths(Money::units(-10), init), -1);  // -0.005 -> -0.01
  EXPECT_EQ(return_hundredths(Money::units(9), init), 0);
  EXPECT_EQ(return_hundredths(Money::units(35'270), init), 1764);
  EXPECT_THROW((void)return_hundredths(Money::units(1), Money::units(0)), Error);
  EXPECT_EQ(format_hundredths(-879), "-8.79");
  EXPECT_EQ(format_hundredths(5), "0.05");
  EXPECT_EQ(format_hundredths(-5), "-0.05");
  EXPECT_EQ(format_hundredths(1350), "13.50");
}

TEST(SummarizePair, ReportedTableRows) {
  for (const auto& r : testing_support::reported_rows()) {
    if (r.sign_anomaly) continue;
    const auto s = summarize_profit(Money::units(r.profit), Money::units(100'000));
    EXPECT_LE(std::llabs(s.annual_return_hundredths - r.printed_hundredths), 1) << r.pair;
    const double exact = static_cast<double>(r.profit) / 200'000.0 * 100.0;
    EXPECT_NEAR(s.annual_return(), exact, 0.005 + 1e-12) << r.pair;
  }
  EXPECT_EQ(summarize_profit(Money::units(32'488), Money::units(100'000)).annual_return_hundredths, 1624);
  EXPECT_EQ(summarize_profit(Money::units(-17'575), Money::units(100'000)).annual_return_hundredths, -879);
}

TEST(SectorReport, ReportedSectorSummaries) {
  struct Want {
    const char* sector;
    std::size_t pairs, positive;
    std::int64_t max;
  };
  for (const Want& w : {Want{"Auto", 6, 6, 1763}, Want{"Pharma", 5, 4, 1749}, Want{"Realty", 7, 7, 1624},
                        Want{"Banking", 5, 4, 996}, Want{"IT", 6, 4, 873}}) {
    const auto r = sector_report(testing_support::sector_summaries(w.sector), w.sector);
    EXPECT_EQ(r.n_pairs, w.pairs) << w.sector;
    EXPECT_EQ(r.n_positive, w.positive) << w.sector;
    EXPECT_EQ(r.max_return_hundredths, w.max) << w.sector;
    EXPECT_EQ(r.rows.front().annual_return_hundredths, r.max_return_hundredths);
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
      EXPECT_GE(r.rows[i - 1].annual_return_hundredths, r.rows[i].annual_return_hundredths);
    }
  }
  const auto banking = sector_report(testing_support::sector_summaries("Banking"), "Banking");
  EXPECT_EQ(banking.rows.back().pair_name(), "AX - SB");
  EXPECT_EQ(banking.rows.back().annual_return_hundredths, -879);
}

TEST(SectorReport, SingleLossAndEmpty) {
  const auto r = sector_report({summarize_profit(Money::units(-500), Money::units(100'000), "A", "B")}, "S");
  EXPECT_EQ(r.n_pairs, 1u);
  EXPECT_EQ(r.n_positive, 0u);
  EXPECT_EQ(r.max_return_hundredths, -25);
  try {
    (void)sector_report({}, "S");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyList);
  }
}

TEST(SectorReport, TiesOrderedByPairName) {
  const auto r = sector_report({summarize_profit(Money::units(100), Money::units(100'000), "Z", "Y"),
                                summarize_profit(Money::units(100), Money::units(100'000), "A", "B")},
                               "S");
  EXPECT_EQ(r.rows[0].pair_name(), "A - B");
}
