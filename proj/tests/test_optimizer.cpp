#include <cmath>

#include <gtest/gtest.h>

#include "vat/errors.hpp"
#include "vat/model.hpp"
#include "vat/optimizer.hpp"

using namespace vat;

TEST(Lambert, KnownValues) {
  EXPECT_EQ(lambert_w0(0.0).w0, 0.0);
  EXPECT_NEAR(lambert_w0(std::exp(1.0)).w0, 1.0, 1e-15);
  EXPECT_NEAR(lambert_w0(1.0).w0, 0.5671432904097838, 1e-15);
  EXPECT_NEAR(lambert_w0(-1.0 / std::exp(1.0)).w0, -1.0, 1e-7);
  EXPECT_NEAR(lambert_w0(1.0 / std::exp(1.0)).w0, 0.27846454276107380, 1e-15);
  // 10 e^10
  EXPECT_NEAR(lambert_w0(10.0 * std::exp(10.0)).w0, 10.0, 1e-13);
  EXPECT_THROW(lambert_w0(-0.5), DomainError);
}

TEST(Lambert, ResidualOnGrid) {
  for (double x = -0.36; x <= 1e6; x = x < 1 ? x + 0.01 : x * 1.1) {
    const LambertEval e = lambert_w0(x);
    EXPECT_LE(e.residual, 1e-12 * std::max(1.0, std::abs(x))) << "x=" << x;
    EXPECT_GE(e.w0, -1.0);
  }
}

TEST(Optimum, ExactAndRoundedClosedForms) {
  const double w = 0.27846454276107380;
  const auto exact = optimal_levels_constant_c_exact(1000.0);
  EXPECT_NEAR(exact.levels, std::log(1000.0) / (1.0 + w), 1e-12);
  EXPECT_NEAR(exact.growth, std::exp(1.0 + w), 1e-12);
  EXPECT_NEAR(std::pow(exact.growth, exact.levels), 1000.0, 1e-9);
  const auto rounded = optimal_levels_constant_c_rounded(1000.0);
  EXPECT_NEAR(rounded.levels, std::log(1000.0) / 1.5, 1e-12);
  EXPECT_NEAR(rounded.growth, std::exp(1.5), 1e-12);
  const auto simple = optimal_levels_simplified(1000.0);
  EXPECT_NEAR(simple.levels, 6.907755278982137, 1e-12);
  EXPECT_DOUBLE_EQ(simple.growth, std::exp(1.0));
}

TEST(Optimum, ExactFormIsStationaryPoint) {
  for (double c : {1e2, 1e3, 1e4, 1e6}) {
    const double l = optimal_levels_constant_c_exact(c).levels;
    const double h = 1e-4;
    const double left = lsm_objective(c, l - h);
    const double mid = lsm_objective(c, l);
    const double right = lsm_objective(c, l + h);
    EXPECT_LT(mid, left);
    EXPECT_LT(mid, right);
  }
}

TEST(Minimize, UnitLevelingAtC1000) {
  MinimizeRequest req;
  req.c = 1000.0;
  const OptimizationResult res = minimize_cost_ratio(req);
  EXPECT_EQ(res.levels, 5);
  EXPECT_NEAR(res.growth, std::pow(1000.0, 0.2), 1e-12);
  // 4 + 5 * 1000^(1/5)
  EXPECT_NEAR(res.objective, 4.0 + 5.0 * std::pow(1000.0, 0.2), 1e-12);
  EXPECT_NEAR(res.objective, 23.9, 0.1);
  EXPECT_GT(res.real_levels, 5.0);
  ASSERT_EQ(res.curve.size(), 30u);
  EXPECT_EQ(res.curve[0].objective, 1000.0);
}

TEST(Minimize, SmallAMovesOptimumDown) {
  MinimizeRequest req;
  req.a = 0.1;
  const OptimizationResult res = minimize_cost_ratio(req);
  EXPECT_EQ(res.levels, 3);
  EXPECT_NEAR(res.objective, 7.7, 1e-12);
  EXPECT_EQ(res.real_levels, 0.0);
}

TEST(Minimize, ValueLog) {
  MinimizeRequest req;
  req.design = parse_design("leveling-log");
  req.p = 0.01;
  const OptimizationResult res = minimize_cost_ratio(req);
  EXPECT_EQ(res.levels, 5);
  // (0.01 * 23.905... + 1.01) / 1.01
  EXPECT_NEAR(res.objective, (0.01 * (4.0 + 5.0 * std::pow(1000.0, 0.2)) + 1.01) / 1.01, 1e-12);
}

TEST(Minimize, TieringPrefersOneLevel) {
  MinimizeRequest req;
  req.design = parse_design("tiering");
  const OptimizationResult res = minimize_cost_ratio(req);
  EXPECT_EQ(res.levels, 1);
  EXPECT_EQ(res.objective, 1.0);
}

TEST(Minimize, RejectsEmptyRange) {
  MinimizeRequest req;
  req.l_min = 5;
  req.l_max = 4;
  EXPECT_THROW(minimize_cost_ratio(req), DomainError);
}

TEST(Schedule, AnchorRecurrence) {
  const auto f = growth_schedule_from_anchor(5, 10.0);
  ASSERT_EQ(f.size(), 5u);
  EXPECT_DOUBLE_EQ(f[4], 10.0);
  EXPECT_DOUBLE_EQ(f[3], 11.0);
  EXPECT_DOUBLE_EQ(f[2], 11.0 + 1.0 / 11.0);
  // f_2 = f_3 + 1 / (f_3 f_4), f_1 = f_2 + 1 / (f_2 f_3 f_4)
  const double f2 = f[2] + 1.0 / (f[2] * f[3]);
  EXPECT_DOUBLE_EQ(f[1], f2);
  EXPECT_DOUBLE_EQ(f[0], f2 + 1.0 / (f2 * f[2] * f[3]));
  const double expected[] = {11.0998, 11.0991, 11.0909, 11.0, 10.0};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(f[static_cast<std::size_t>(i)], expected[i], 1e-3);
}

TEST(Schedule, ConstantTotalRecoversAnchor) {
  const auto anchored = growth_schedule_from_anchor(5, 10.0);
  const double total = schedule_total_bytes(anchored, 1.0);
  const GrowthSchedule s = growth_schedule_constant_total(5, total, 1.0);
  ASSERT_EQ(s.factors.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(s.factors[i], anchored[i], 1e-7);
  EXPECT_NEAR(s.total_bytes, total, 1e-9 * total);
  EXPECT_GT(s.lagrange_multiplier, 0.0);
}

TEST(Schedule, TotalBytes) {
  // 1 + 2 + 2*3
  EXPECT_DOUBLE_EQ(schedule_total_bytes({2.0, 3.0}, 1.0), 9.0);
  // S_l = 6; 6 * (3 + 1 * (5 - 2))
  EXPECT_DOUBLE_EQ(traffic_for_schedule({2.0, 3.0}, 1.0, 1.0), 36.0);
}

TEST(Schedule, Infeasible) {
  EXPECT_THROW(growth_schedule_constant_total(5, 3.0, 1.0), DomainError);
  EXPECT_THROW(growth_schedule_constant_total(1, 100.0, 1.0), DomainError);
}

TEST(LsmObjective, Values) {
  // 2 * 3 * 10 + 5
  EXPECT_NEAR(lsm_objective(1000.0, 3.0), 65.0, 1e-12);
}
