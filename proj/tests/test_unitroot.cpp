#include <cmath>

#include <gtest/gtest.h>

#include "frozen_oracles.hpp"
#include "pairtrade/unitroot.hpp"
#include "support.hpp"

using namespace pairtrade;

TEST(AdfTest, DefaultMaxLag) {
  EXPECT_EQ(default_max_lag(100), 12u);
  EXPECT_EQ(default_max_lag(300), 15u);
  EXPECT_EQ(default_max_lag(740), 19u);
  EXPECT_EQ(default_max_lag(500), 17u);
}

TEST(AdfTest, MatchesReferenceOnRandomWalk) {
  const auto [x, y] = testing_support::fixture_pair(20240611, 300);
  const auto c = adf_test(x, Deterministic::Constant);
  EXPECT_NEAR(c.tau, frozen::kAdfX_c_tau, 1e-9);
  EXPECT_NEAR(c.p_value, frozen::kAdfX_c_p, 1e-9);
  EXPECT_EQ(c.used_lags, static_cast<std::size_t>(frozen::kAdfX_c_lags));
  EXPECT_EQ(c.n_eff, static_cast<std::size_t>(frozen::kAdfX_c_nobs));
  EXPECT_EQ(c.max_lag, 15u);
  const auto n = adf_test(x, Deterministic::None);
  EXPECT_NEAR(n.tau, frozen::kAdfX_n_tau, 1e-9);
  EXPECT_NEAR(n.p_value, frozen::kAdfX_n_p, 1e-9);
  EXPECT_EQ(n.used_lags, static_cast<std::size_t>(frozen::kAdfX_n_lags));
}

TEST(AdfTest, MatchesReferenceOnStationarySeries) {
  const auto s = testing_support::ar1(777, 400, 0.7);
  const auto r = adf_test(s);
  EXPECT_NEAR(r.tau, frozen::kAr_c_tau, 1e-9);
  EXPECT_NEAR(r.p_value, frozen::kAr_c_p, 1e-12);
  EXPECT_EQ(r.used_lags, static_cast<std::size_t>(frozen::kAr_c_lags));
  EXPECT_EQ(r.n_eff, static_cast<std::size_t>(frozen::kAr_c_nobs));
  EXPECT_TRUE(r.stationary_at(Level::P1));
  const auto capped = adf_test(s, Deterministic::Constant, 3);
  EXPECT_NEAR(capped.tau, frozen::kAr_c3_tau, 1e-9);
  EXPECT_EQ(capped.used_lags, static_cast<std::size_t>(frozen::kAr_c3_lags));
  EXPECT_EQ(capped.max_lag, 3u);
}

TEST(AdfTest, ResultInvariants) {
  testing_support::Gauss g(9);
  for (int rep = 0; rep < 20; ++rep) {
    const auto y = rep % 2 ? testing_support::random_walk(g, 200) : testing_support::ar1(g, 200, 0.6);
    for (auto det : {Deterministic::None, Deterministic::Constant}) {
      const auto r = adf_test(y, det);
      EXPECT_EQ(r.n_eff, y.size() - r.used_lags - 1);
      EXPECT_LT(r.crit[0], r.crit[1]);
      EXPECT_LT(r.crit[1], r.crit[2]);
      EXPECT_GE(r.p_value, 0.0);
      EXPECT_LE(r.p_value, 1.0);
      EXPECT_EQ(r.crit_at(Level::P1), mackinnon_crit(1, det, Level::P1, static_cast<double>(r.n_eff)));
      const auto again = adf_test(y, det);
      EXPECT_EQ(again.used_lags, r.used_lags);
      EXPECT_EQ(again.tau, r.tau);
    }
  }
}

TEST(AdfTest, ScaleAndShiftInvariance) {
  testing_support::Gauss g(21);
  const auto y = testing_support::ar1(g, 300, 0.9);
  const auto base = adf_test(y);
  for (double c : {100.0, -0.5, 1e-3}) {
    std::vector<double> s(y);
    for (auto& v : s) v *= c;
    const auto r = adf_test(s);
    EXPECT_NEAR(r.tau, base.tau, 1e-8);
    EXPECT_EQ(r.used_lags, base.used_lags);
    EXPECT_NEAR(r.p_value, base.p_value, 1e-9);
  }
  std::vector<double> shifted(y);
  for (auto& v : shifted) v += 250.0;
  const auto r = adf_test(shifted);
  EXPECT_NEAR(r.tau, base.tau, 1e-8);
  EXPECT_EQ(r.used_lags, base.used_lags);
}

TEST(AdfTest, StationaryAr1RejectsAtOnePercent) {
  testing_support::Gauss g(500);
  const auto y = testing_support::ar1(g, 500, 0.5);
  EXPECT_LT(adf_test(y).p_value, 0.01);
}

TEST(AdfTest, LargeSampleSizeIsNominal) {
  constexpr int reps = 4000;
  int rejects = 0;
  for (int s = 0; s < reps; ++s) {
    testing_support::Gauss g(900'000 + static_cast<std::uint64_t>(s));
    rejects += adf_test(testing_support::random_walk(g, 500)).p_value < 0.05;
  }
  EXPECT_NEAR(static_cast<double>(rejects) / reps, 0.05, 0.01);
}

TEST(AdfTest, Errors) {
  try {
    (void)adf_test(std::vector<double>(40, 3.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConstantSeries);
  }
  testing_support::Gauss g(1);
  try {
    (void)adf_test(testing_support::random_walk(g, 15));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SeriesTooShort);
  }
  // Long enough to fit, but the effective sample is below the surface minimum.
  try {
    (void)adf_test(testing_support::random_walk(g, 20), Deterministic::Constant, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SampleTooSmall);
  }
  EXPECT_NO_THROW((void)adf_test(testing_support::random_walk(g, 30), Deterministic::Constant, 2));
  auto with_nan = testing_support::random_walk(g, 100);
  with_nan[50] = NAN;
  EXPECT_THROW((void)adf_test(with_nan), Error);
}

TEST(EngleGranger, MatchesReferenceStatistic) {
  const auto [x, y] = testing_support::fixture_pair(20240611, 300);
  const auto r = engle_granger(y, x);
  EXPECT_NEAR(r.tau, frozen::kCoint_tau, 1e-9);
  EXPECT_LE(testing_support::rel_err(r.p_value, frozen::kCoint_p), 1e-8);
  EXPECT_EQ(r.crit_at(Level::P5),
            mackinnon_crit(2, Deterministic::Constant, Level::P5, static_cast<double>(r.n_eff)));
  EXPECT_NEAR(r.slope, 0.5, 0.05);
}

TEST(EngleGranger, ConstructedCointegrationRejectsBothOrderings) {
  testing_support::Gauss g(31);
  const auto x = testing_support::random_walk(g, 750, 100.0);
  const auto u = testing_support::ar1(g, 750, 0.5, 0.5);
  std::vector<double> y(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) y[t] = 2.0 * x[t] + u[t];
  EXPECT_LT(engle_granger(y, x).p_value, 0.05);
  EXPECT_LT(engle_granger(x, y).p_value, 0.05);
}

TEST(EngleGranger, WhiteNoiseResidualsStronglyReject) {
  testing_support::Gauss g(32);
  const auto x = testing_support::random_walk(g, 500, 50.0);
  std::vector<double> y(x);
  for (auto& v : y) v += g();
  EXPECT_LT(engle_granger(y, x).p_value, 0.01);
}

TEST(EngleGranger, PriceSeriesOverloadRecordsTickers) {
  testing_support::Gauss g(33);
  auto x = testing_support::random_walk(g, 60, 100.0);
  std::vector<double> y(x);
  for (auto& v : y) v = 0.5 * v + g();
  const auto r = engle_granger(testing_support::series("Y", y), testing_support::series("X", x));
  EXPECT_EQ(r.dependent_ticker, "Y");
  EXPECT_EQ(r.regressor_ticker, "X");
}

TEST(EngleGranger, Errors) {
  std::vector<double> x(40, 5.0);
  std::vector<double> y(40);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(i % 7);
  try {
    (void)engle_granger(y, x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateRegressor);
  }
  try {
    (void)engle_granger(std::vector<double>(29, 1.0), std::vector<double>(29, 2.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SeriesTooShort);
  }
  try {
    (void)engle_granger(std::vector<double>(40, 1.0), std::vector<double>(41, 2.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
}
