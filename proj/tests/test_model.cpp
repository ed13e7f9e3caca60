#include <cmath>

#include <gtest/gtest.h>

#include "vat/errors.hpp"
#include "vat/model.hpp"

using namespace vat;

namespace {

ModelParams fl(double a, double r, double f, double l, double p = 1.0) {
  return ModelParams::make(a, r, f, l, std::nullopt, p);
}

}  // namespace

TEST(ExactDecimal, ParsesLiterals) {
  EXPECT_EQ(exact_from_decimal("0.68"), Exact(68, 100));
  EXPECT_EQ(exact_from_decimal("7"), Exact(7));
  EXPECT_EQ(exact_from_decimal("1e-3"), Exact(1, 1000));
  EXPECT_EQ(exact_from_decimal("-2.5E1"), Exact(-25));
  EXPECT_THROW(exact_from_decimal("abc"), DomainError);
  EXPECT_THROW(exact_from_decimal("1.2.3"), DomainError);
  EXPECT_EQ(exact_from_double(0.5), Exact(1, 2));
}

TEST(ModelParams, DerivesThirdOfFLC) {
  const auto p = ModelParams::make(1, 1, 10.0, 3.0, std::nullopt);
  EXPECT_DOUBLE_EQ(p.c, 1000.0);
  const auto q = ModelParams::make(1, 1, 10.0, std::nullopt, 1000.0);
  EXPECT_NEAR(q.l, 3.0, 1e-12);
  const auto s = ModelParams::make(1, 1, std::nullopt, 5.0, 1000.0);
  EXPECT_NEAR(s.f, 3.981071705534972, 1e-12);
  EXPECT_THROW(ModelParams::make(1, 1, 10.0, std::nullopt, std::nullopt), DomainError);
  EXPECT_THROW(ModelParams::make(1, 1, 10.0, 3.0, 999.0), DomainError);
}

TEST(ModelParams, RejectsOutOfDomain) {
  EXPECT_THROW(fl(1.5, 1, 10, 3), DomainError);
  EXPECT_THROW(fl(-0.1, 1, 10, 3), DomainError);
  EXPECT_THROW(fl(1, 0, 10, 3), DomainError);
  EXPECT_THROW(fl(1, 1.2, 10, 3), DomainError);
  EXPECT_THROW(fl(1, 1, 1.0, 3), DomainError);
  EXPECT_THROW(fl(1, 1, 10, 0.5), DomainError);
  EXPECT_THROW(fl(1, 1, 10, 3, 0.0), DomainError);
}

TEST(Leveling, ReferencePoints) {
  EXPECT_EQ(cost_ratio_basic(fl(1, 1, 10, 3)), 32.0);
  // f = 4 at C = 1000: 5 log_4(1000) - 1.
  const double l4 = std::log(1000.0) / std::log(4.0);
  EXPECT_NEAR(cost_ratio_basic(fl(1, 1, 4, l4)), 5.0 * l4 - 1.0, 1e-12);
  EXPECT_NEAR(cost_ratio_basic(fl(1, 1, 4, l4)), 23.91, 0.01);
  EXPECT_DOUBLE_EQ(cost_ratio_basic(fl(1, 0.5, 10, 3)), 64.0);
  // a = 0.1: 5 - 0.3 + 3 = 7.7.
  EXPECT_NEAR(cost_ratio_basic(fl(0.1, 1, 10, 3)), 7.7, 1e-12);
}

TEST(Leveling, SumMatchesHandCount) {
  // f = 2, l = 1, S_0 = 1: two flushes write 1 each; the second also reads and
  // writes the 1 unit already in L_1.
  const SizeLayout layout = SizeLayout::geometric(Exact(1), 2, 1);
  EXPECT_EQ(traffic_basic_sum(layout, Exact(1), 2), Exact(4));
  EXPECT_EQ(traffic_basic_sum(layout, Exact(0), 2), Exact(2));
  // f = 3, l = 2, S_0 = 1, a = 1.
  // L0 -> L1: 9 merges, write 1 each, lower residues 0,1,2 repeating: 2*(3*3) = 18.
  // L1 -> L2: 3 merges of 3, read+write 6 each, residues 0,1,2: 2*3*3 = 18.
  // Total 9 + 18 + 18 + 18 = 63 = 9 * (3 - 2 + 6).
  const SizeLayout two = SizeLayout::geometric(Exact(1), 3, 2);
  EXPECT_EQ(traffic_basic_sum(two, Exact(1), 3), Exact(63));
  EXPECT_EQ(traffic_basic_closed(Exact(9), Exact(1), 3, 2), Exact(63));
}

TEST(Leveling, SumEqualsClosedExactly) {
  for (std::int64_t f : {2, 4, 8, 10}) {
    for (int l : {1, 2, 3, 4, 5}) {
      for (const char* a : {"0", "0.25", "0.68", "1"}) {
        const Exact ea = exact_from_decimal(a);
        const SizeLayout layout = SizeLayout::geometric(Exact(3), f, l);
        EXPECT_EQ(traffic_basic_sum(layout, ea, f), traffic_basic_closed(layout.sl, ea, f, l))
            << "f=" << f << " l=" << l << " a=" << a;
      }
    }
  }
}

TEST(Leveling, SumRejectsBadGeometry) {
  SizeLayout layout = SizeLayout::geometric(Exact(1), 4, 2);
  layout.level_sizes[1] = Exact(3);
  EXPECT_THROW(traffic_basic_sum(layout, Exact(1), 4), GeometryError);
}

TEST(ValueLog, ReferencePoints) {
  // (0.01 * 32 + 1.01) / 1.01
  EXPECT_NEAR(cost_ratio_log(fl(1, 1, 10, 3, 0.01)), 1.33 / 1.01, 1e-12);
  EXPECT_NEAR(cost_ratio_log(fl(1, 1, 10, 3, 0.01)), 1.3168, 1e-4);
  // p = 1: (32 + 2) / 2
  EXPECT_DOUBLE_EQ(cost_ratio_log(fl(1, 1, 10, 3, 1.0)), 17.0);
}

TEST(ValueLog, SumEqualsClosedExactly) {
  for (std::int64_t f : {4, 8, 10}) {
    for (int l : {2, 3, 4}) {
      for (const char* p : {"0.01", "0.5", "1"}) {
        const Exact a = exact_from_decimal("0.68");
        const SizeLayout layout = SizeLayout::geometric(Exact(101), f, l).with_key_ratio(exact_from_decimal(p));
        EXPECT_EQ(traffic_log_sum(layout, a, f), traffic_log_closed(layout.kl, layout.sl, a, f, l));
      }
    }
  }
}

TEST(ValueLog, BytesAgreeWithCostRatio) {
  // p = 1/4: K_l = S_l / 5.
  const double sl = 1000.0;
  const double d = traffic_log_closed(sl / 5.0, sl, 1.0, 10.0, 3.0);
  EXPECT_DOUBLE_EQ(d, 200.0 * 32.0 + 1000.0);
  EXPECT_NEAR(cost_ratio_from_bytes(d, sl, 1.0), cost_ratio_log(fl(1, 1, 10, 3, 0.25)), 1e-12);
}

TEST(Tiering, ReferencePoints) {
  EXPECT_DOUBLE_EQ(cost_ratio_tiering(1.0, 3.0), 5.0);
  EXPECT_NEAR(cost_ratio_tiering(1.0, 10.0, 1000.0), 5.0, 1e-12);
  EXPECT_NEAR(cost_ratio_basic(fl(1, 1, 10, 3)) / cost_ratio_tiering(1.0, 10.0, 1000.0), 6.4, 1e-12);
  // (0.01 * 5 + 1.01) / 1.01
  EXPECT_NEAR(cost_ratio_tiering_log(fl(1, 1, 10, 3, 0.01)), 1.06 / 1.01, 1e-12);
}

TEST(PerSst, ClosedFormValue) {
  // f = 10, l = 3, a = 1, B / S_l = 1e-3: 5 + 0.03 + 60 - 10 * 0.999 / 0.9.
  EXPECT_NEAR(traffic_per_sst_closed(1.0, 1.0, 10.0, 3.0, 1e-3), 53.93, 1e-12);
  // a = 0 reduces to 2l - 1.
  EXPECT_DOUBLE_EQ(traffic_per_sst_closed(7.0, 0.0, 10.0, 3.0, 1e-3), 35.0);
}

TEST(PerSst, SumMatchesHandCount) {
  // f = 2, l = 1, S_0 = 2, B = 1: four moves of 1 unit written; k-th move
  // overlaps k/2 units for k = 1..4: 2 * (1 + 2 + 3 + 4) / 2 = 10.
  const SizeLayout layout = SizeLayout::geometric(Exact(2), 2, 1, Exact(1));
  EXPECT_EQ(traffic_per_sst_sum(layout, Exact(1), 2), Exact(14));
  EXPECT_EQ(traffic_per_sst_closed(layout.sl, Exact(1), 2, 1, Exact(1)), Exact(14));
}

TEST(PerSst, SumEqualsClosedExactly) {
  for (std::int64_t f : {4, 8, 10}) {
    for (int l : {2, 3}) {
      for (const char* a : {"0", "0.25", "0.68", "1"}) {
        const Exact ea = exact_from_decimal(a);
        const SizeLayout layout = SizeLayout::geometric(Exact(4), f, l, Exact(1));
        EXPECT_EQ(traffic_per_sst_sum(layout, ea, f),
                  traffic_per_sst_closed(layout.sl, ea, f, l, layout.sst));
      }
    }
  }
}

TEST(PerSst, RejectsNonDividingSst) {
  const SizeLayout layout = SizeLayout::geometric(Exact(3), 4, 2, Exact(2));
  EXPECT_THROW(traffic_per_sst_sum(layout, Exact(1), 4), GeometryError);
}

TEST(Dispatch, CostRatioByDesign) {
  const ModelParams p = fl(1, 1, 10, 3, 0.01);
  EXPECT_EQ(cost_ratio(parse_design("leveling"), p), cost_ratio_basic(p));
  EXPECT_EQ(cost_ratio(parse_design("leveling-log"), p), cost_ratio_log(p));
  EXPECT_EQ(cost_ratio(parse_design("tiering"), p), 5.0);
  EXPECT_EQ(cost_ratio(parse_design("tiering-log"), p), cost_ratio_tiering_log(p));
  EXPECT_NEAR(cost_ratio(parse_design("leveling-per-sst"), p, 1e-3), 53.93, 1e-12);
  // (0.01 * 53.93 + 1.01) / 1.01
  EXPECT_NEAR(cost_ratio(parse_design("leveling-log-per-sst"), p, 1e-3), 1.5493 / 1.01, 1e-12);
  EXPECT_THROW(cost_ratio(parse_design("leveling-per-sst"), p, 0.0), DomainError);
}

TEST(Design, RoundTripsNames) {
  for (const char* name : {"leveling", "leveling-log", "tiering", "tiering-log", "leveling-per-sst",
                           "leveling-log-per-sst"}) {
    EXPECT_EQ(to_string(parse_design(name)), name);
  }
  EXPECT_THROW(parse_design("bogus"), DomainError);
}

TEST(SpaceAmplification, ReferencePoints) {
  EXPECT_NEAR(space_amplification(10, 3), 0.111, 1e-12);
  // (1 - 4^-5) / 3
  EXPECT_NEAR(space_amplification(4, 5), 1023.0 / 3072.0, 1e-12);
  EXPECT_GT(space_amplification(4, 5), 0.25);
}

TEST(Helpers, LimitsAndPageRate) {
  EXPECT_DOUBLE_EQ(log_benefit_limit(1.0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(single_level_projection(3), 5.0);
  // R / S_p * (2 * 30 + 5)
  EXPECT_DOUBLE_EQ(lsm_page_rate(LsmParams::uniform(4096.0, 4096.0, 10.0, 3)), 65.0);
  EXPECT_THROW(log_benefit_limit(0.0), DomainError);
}
