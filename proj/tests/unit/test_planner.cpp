#include <gtest/gtest.h>

#include <cmath>

#include "ovi/planner.hpp"

using namespace ovi;

// Reference values below were computed independently (scipy root finding
// and a 2e5-point grid over y), not with this code.

TEST(Planner, BinomExponentValues) {
  EXPECT_NEAR(binom_exponent(2, 1), 2.0, 1e-12);
  EXPECT_NEAR(binom_exponent(1.5, 0.5), 1.3774437510817343, 1e-12);
  EXPECT_NEAR(binom_exponent(1.3, 0.3), 1.0131547884797105, 1e-12);
  EXPECT_NEAR(binom_exponent(3, 1), 2.7548875021634682, 1e-12);
  EXPECT_EQ(binom_exponent(5, 0), 0.0);
  EXPECT_EQ(binom_exponent(5, 5), 0.0);
  EXPECT_THROW(binom_exponent(1, 2), ContractError);
  EXPECT_THROW(binom_exponent(0, 0), ContractError);
  EXPECT_THROW(binom_exponent(1, -0.1), ContractError);
}

TEST(Planner, BinomExponentSymmetricAndPeaksAtHalf) {
  for (double m : {1.0, 2.0, 3.7}) {
    for (double k = 0.05; k < m; k += 0.05) {
      ASSERT_NEAR(binom_exponent(m, k), binom_exponent(m, m - k), 1e-9);
      ASSERT_LE(binom_exponent(m, k), m + 1e-12);
    }
    EXPECT_NEAR(binom_exponent(m, m / 2), m, 1e-12);
  }
}

TEST(Planner, ChooseC1) {
  EXPECT_NEAR(choose_c1(2, 0.05), 0.20380657491770024, 1e-7);
  EXPECT_NEAR(choose_c1(1.5, 0.05), 0.23938846204613318, 1e-7);
  EXPECT_NEAR(choose_c1(3, 0.05), 0.17192548196247898, 1e-7);
  for (double c : {1.2, 2.0, 2.5, 4.0}) {
    const double c1 = choose_c1(c, 0.1);
    ASSERT_LE(binom_exponent(c, c1), 0.9 + 1e-9);
    ASSERT_GT(binom_exponent(c, std::min(c / 2, c1 + 1e-6)), 0.9 - 1e-6);
  }
  EXPECT_THROW(choose_c1(1.0, 0.05), ContractError);
  EXPECT_THROW(choose_c1(2.0, 0.0), ContractError);
}

TEST(Planner, ExpectedDuplication) {
  EXPECT_NEAR(expected_duplication(2, 1, 2), 0.543106606314935, 1e-6);
  EXPECT_NEAR(expected_duplication(2, 0.5, 2), 0.7822092200964317, 1e-6);
  EXPECT_NEAR(expected_duplication(2, 1.5, 2), 0.2822092200964317, 1e-6);
  EXPECT_NEAR(expected_duplication(3, 1, 3), 0.7163220659670069, 1e-6);
  // One part covering everything: every zero is in it.
  EXPECT_NEAR(expected_duplication(1.3, 0.3, 1), 1.0, 1e-9);
  EXPECT_THROW(expected_duplication(2, 3, 2), ContractError);
}

TEST(Planner, DuplicationDecreasesWithWeight) {
  double prev = 1e9;
  for (double x = 0.0; x <= 2.0; x += 0.1) {
    const double e = expected_duplication(2, x, 2);
    ASSERT_LE(e, prev + 1e-9);
    prev = e;
  }
}

TEST(Planner, Binomial) {
  EXPECT_EQ(binomial(10, 3), 120.0);
  EXPECT_EQ(binomial(16, 8), 12870.0);
  EXPECT_EQ(binomial(3, 5), 0.0);
  EXPECT_EQ(binomial(40, 20), 137846528820.0);
}

TEST(Planner, QueryGraphDefaults) {
  const ParamSet t = plan_params(256, 16, Profile::tlqg);
  EXPECT_EQ(t.w_bits, 10u);
  EXPECT_EQ(t.w_mask, 0x3FFu);
  EXPECT_EQ(t.x_bits, 2u);
  EXPECT_EQ(t.tau_list, 64u);
  const ParamSet c = plan_params(256, 16, Profile::combined);
  EXPECT_EQ(c.tau_list, 2u);  // round(256^0.1)
  const ParamSet r = plan_params(256, 16, Profile::random_opt);
  EXPECT_EQ(r.w_bits, 8u);
  EXPECT_EQ(r.delta_bits, 1u);
  EXPECT_EQ(r.x_bits, 1u);
  EXPECT_EQ(r.ell_max, 64u);
  EXPECT_EQ(r.tau_list, kUnbounded);
}

TEST(Planner, DboAndSdDefaults) {
  const ParamSet p = plan_params(256, 16, Profile::dbo);
  EXPECT_EQ(p.part_bits, 8u);
  EXPECT_EQ(p.c1_bits, 2u);      // round(0.2038 * 8)
  EXPECT_EQ(p.tau_entry, 147u);  // round(256^0.9)
  EXPECT_EQ(p.tau_s, 16u);
  EXPECT_EQ(p.sd_k, 2u);
  const ParamSet big = plan_params(4096, 30, Profile::sd);
  EXPECT_EQ(big.part_bits, 18u);  // max(d - ceil L, ceil L)
  EXPECT_EQ(big.tau_s, 64u);
}

TEST(Planner, ChecksAndWarnings) {
  const ParamSet t = plan_params(256, 16, Profile::tlqg);
  EXPECT_FALSE(t.sublinear_ok);  // (10 - 2) + log2 64 >= 8
  EXPECT_FALSE(t.warnings.empty());

  ParamSet c = plan_params(1 << 20, 40, Profile::combined);
  EXPECT_EQ(c.w_bits, 25u);
  EXPECT_EQ(c.x_bits, 6u);
  c.x_bits = 8;  // 3x <= w: warning
  c.refresh_checks();
  EXPECT_TRUE(std::any_of(c.warnings.begin(), c.warnings.end(),
                          [](const std::string& w) { return w.find("w_bits/3") != std::string::npos; }));
  c.x_bits = 9;
  c.refresh_checks();
  EXPECT_TRUE(std::none_of(c.warnings.begin(), c.warnings.end(),
                           [](const std::string& w) { return w.find("w_bits/3") != std::string::npos; }));
  c.x_bits = 13;  // 2x >= w
  EXPECT_THROW(c.validate(), PlanningError);

  EXPECT_THROW(plan_params(8, 16, Profile::tlqg), PlanningError);
  EXPECT_THROW(plan_params(1 << 12, 8, Profile::tlqg), PlanningError);
  EXPECT_THROW(parse_profile("nope"), PlanningError);
  EXPECT_EQ(parse_profile("blqg"), Profile::blqg);
}

TEST(Planner, PredictReportsComponents) {
  const PlanReport r = predict(plan_params(1024, 20, Profile::tlqg));
  ASSERT_FALSE(r.components.empty());
  EXPECT_EQ(r.components.front().name, "top_bitmaps");
  // w = round(12.5) = 13, x = 3: sum_{j<=3} C(13,j) bitmaps of 2^7 bits
  EXPECT_EQ(r.params.w_bits, 13u);
  EXPECT_EQ(r.components.front().predicted_bits, (1 + 13 + 78 + 286) * 128.0);
  EXPECT_TRUE(r.fits_budget);
}
