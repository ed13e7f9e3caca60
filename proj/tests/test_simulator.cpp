#include <cmath>

#include <gtest/gtest.h>

#include "vat/errors.hpp"
#include "vat/model.hpp"
#include "vat/simulator.hpp"

using namespace vat;

namespace {

SimConfig counters(const std::string& design, int f, int l, std::uint64_t s0 = 1 << 20) {
  SimConfig c;
  c.design = parse_design(design);
  c.growth = f;
  c.levels = l;
  c.s0_bytes = s0;
  c.sst_bytes = s0;
  return c;
}

std::uint64_t perfect(const SimConfig& c) {
  std::uint64_t d = c.s0_bytes;
  for (int i = 0; i < c.levels; ++i) d *= static_cast<std::uint64_t>(c.growth);
  return d;
}

constexpr std::uint64_t kPair = 1082;

SimConfig ssts(const std::string& design, int f, int l, std::uint64_t mem_pairs, std::uint64_t sst_pairs) {
  SimConfig c;
  c.design = parse_design(design);
  c.growth = f;
  c.levels = l;
  c.s0_bytes = mem_pairs * kPair;
  c.sst_bytes = sst_pairs * kPair;
  return c;
}

WorkloadSpec workload(KeyDistribution d, std::uint64_t n, std::uint64_t seed = 1) {
  WorkloadSpec w;
  w.num_pairs = n;
  w.distribution = d;
  w.seed = seed;
  return w;
}

}  // namespace

TEST(Counters, LevelingMatchesClosedForm) {
  for (int f : {8, 10}) {
    for (int l : {2, 3}) {
      for (double a : {0.0, 0.25, 0.68, 1.0}) {
        SimConfig c = counters("leveling", f, l);
        c.a_override = a;
        const SimReport r = simulate_counters(c, perfect(c));
        const double expected = cost_ratio_basic(ModelParams::make(a, 1, f, l, std::nullopt));
        EXPECT_NEAR(r.amplification, expected, 1e-9 * expected) << f << " " << l << " " << a;
      }
    }
  }
}

TEST(Counters, TieringMatchesClosedForm) {
  for (int f : {8, 10}) {
    for (int l : {2, 3}) {
      const SimConfig c = counters("tiering", f, l);
      const SimReport r = simulate_counters(c, perfect(c));
      EXPECT_NEAR(r.amplification, 2.0 * l - 1.0, 1e-12);
      EXPECT_EQ(r.measured_a, 0.0);
    }
  }
}

TEST(Counters, ValueLogMatchesClosedForm) {
  for (int f : {8, 10}) {
    for (int l : {2, 3}) {
      for (double p : {0.01, 0.5}) {
        SimConfig c = counters("leveling-log", f, l);
        c.key_ratio = p;
        const SimReport r = simulate_counters(c, perfect(c));
        const double expected = cost_ratio_log(ModelParams::make(1, 1, f, l, std::nullopt, p));
        EXPECT_NEAR(r.amplification, expected, 1e-9 * expected);
      }
    }
  }
}

TEST(Counters, TieringLogMatchesClosedForm) {
  SimConfig c = counters("tiering-log", 10, 3);
  c.key_ratio = 0.01;
  const SimReport r = simulate_counters(c, perfect(c));
  EXPECT_NEAR(r.amplification, 1.06 / 1.01, 1e-12);
}

TEST(Counters, PerSstMatchesClosedForm) {
  for (int f : {4, 8}) {
    for (int l : {2, 3}) {
      for (double a : {0.25, 1.0}) {
        SimConfig c = counters("leveling-per-sst", f, l, 1 << 20);
        c.sst_bytes = 1 << 18;
        c.a_override = a;
        const std::uint64_t sl = perfect(c);
        const SimReport r = simulate_counters(c, sl);
        const double expected =
            traffic_per_sst_closed(1.0, a, double(f), double(l), static_cast<double>(c.sst_bytes) / static_cast<double>(sl));
        EXPECT_NEAR(r.amplification, expected, 1e-9 * expected) << f << " " << l << " " << a;
      }
    }
  }
}

TEST(Counters, PerLevelAccounting) {
  SimConfig c = counters("leveling", 10, 3);
  c.a_override = 1.0;
  const SimReport r = simulate_counters(c, perfect(c));
  ASSERT_EQ(r.levels.size(), 4u);
  EXPECT_EQ(r.levels[0].compactions, 1000u);
  EXPECT_EQ(r.levels[1].compactions, 100u);
  EXPECT_EQ(r.levels[2].compactions, 10u);
  EXPECT_EQ(r.levels[0].bytes_read, 100.0 * 45.0 * (1 << 20));
  EXPECT_EQ(r.levels[3].resident_bytes, static_cast<double>(perfect(c)));
  EXPECT_EQ(r.effective_levels, 3);
}

TEST(Counters, GeometryErrors) {
  SimConfig c = counters("leveling", 10, 3);
  EXPECT_THROW(simulate_counters(c, perfect(c) + 1), GeometryError);
  c.allow_truncate = true;
  const SimReport r = simulate_counters(c, perfect(c) * 5);
  EXPECT_EQ(r.effective_levels, 3);
  EXPECT_NEAR(r.truncated_fraction, 0.8, 1e-12);
  ASSERT_FALSE(r.notes.empty());
  const SimReport fewer = simulate_counters(c, perfect(c) - 1);
  EXPECT_EQ(fewer.effective_levels, 2);
  c.sst_bytes = 3;
  EXPECT_THROW(simulate_counters(c, perfect(c)), GeometryError);
}

TEST(Counters, TieringIgnoresA) {
  SimConfig c = counters("tiering", 8, 2);
  c.a_override = 0.7;
  const SimReport r = simulate_counters(c, perfect(c));
  EXPECT_EQ(r.measured_a, 0.0);
  EXPECT_FALSE(r.notes.empty());
}

TEST(Counters, NoDrainLeavesUpperData) {
  SimConfig c = counters("leveling", 4, 2);
  c.a_override = 1.0;
  c.drain_at_end = false;
  const SimReport r = simulate_counters(c, perfect(c));
  // 16 flushes fill L_1 four times; each compacts on reaching capacity, so L_1 ends empty.
  EXPECT_EQ(r.levels[1].resident_bytes, 0.0);
}

TEST(Ssts, SortedInputHasNoMergeAmplification) {
  const SimReport r = simulate_ssts(workload(KeyDistribution::sorted, 32768), ssts("leveling", 8, 3, 64, 8));
  EXPECT_LT(r.measured_a, 0.05);
  EXPECT_NEAR(r.amplification, 5.0, 1e-12);
  EXPECT_GT(r.a_samples, 0u);
}

TEST(Ssts, UniformInputHasFullMergeAmplification) {
  const SimReport r = simulate_ssts(workload(KeyDistribution::uniform, 32768), ssts("leveling", 8, 3, 64, 8));
  EXPECT_GT(r.measured_a, 0.9);
  EXPECT_GT(r.amplification, 15.0);
}

TEST(Ssts, Deterministic) {
  const SimConfig c = ssts("leveling-per-sst", 4, 3, 64, 8);
  const SimReport a = simulate_ssts(workload(KeyDistribution::zipf, 4096, 7), c);
  const SimReport b = simulate_ssts(workload(KeyDistribution::zipf, 4096, 7), c);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.amplification, b.amplification);
  EXPECT_EQ(a.measured_a, b.measured_a);
}

TEST(Ssts, TieringCostsTwoLMinusOne) {
  const SimReport r = simulate_ssts(workload(KeyDistribution::uniform, 1024), ssts("tiering", 4, 3, 16, 4));
  EXPECT_NEAR(r.amplification, 5.0, 1e-12);
}

TEST(Ssts, ValueLogAddsOneDatasetWrite) {
  const SimConfig c = ssts("leveling-log", 8, 2, 64, 8);
  const SimReport r = simulate_ssts(workload(KeyDistribution::sorted, 4096), c);
  // Keys move 2l - 1 times at 3 bytes per pair; values are written once.
  EXPECT_NEAR(r.amplification, (3.0 * 3.0 + 1082.0) / 1082.0, 1e-12);
}

TEST(Ssts, PerSstPickPoliciesConserveData) {
  for (auto pick : {PickPolicy::round_robin, PickPolicy::min_overlap}) {
    SimConfig c = ssts("leveling-per-sst", 4, 3, 32, 4);
    c.pick = pick;
    const SimReport r = simulate_ssts(workload(KeyDistribution::uniform, 4096), c);
    EXPECT_EQ(r.levels.back().resident_bytes, 4096.0 * kPair);
    EXPECT_GT(r.amplification, 5.0);
  }
}

TEST(Ssts, MinOverlapBeatsRoundRobinOnSkew) {
  SimConfig c = ssts("leveling-per-sst", 4, 3, 32, 4);
  const auto w = workload(KeyDistribution::zipf, 8192);
  c.pick = PickPolicy::round_robin;
  const double rr = simulate_ssts(w, c).amplification;
  c.pick = PickPolicy::min_overlap;
  const double mo = simulate_ssts(w, c).amplification;
  EXPECT_LE(mo, rr);
}

TEST(Ssts, PartialMemtableIsFlushed) {
  const SimReport r = simulate_ssts(workload(KeyDistribution::uniform, 1000), ssts("leveling", 4, 2, 64, 8));
  EXPECT_EQ(r.levels.back().resident_bytes, 1000.0 * kPair);
  EXPECT_FALSE(r.notes.empty());
}

TEST(Ssts, Errors) {
  SimConfig c = ssts("leveling", 4, 2, 64, 8);
  c.sst_bytes = 100;
  EXPECT_THROW(simulate_ssts(workload(KeyDistribution::uniform, 100), c), GeometryError);
  c = ssts("leveling", 4, 2, 64, 8);
  c.growth = 1;
  EXPECT_THROW(simulate_ssts(workload(KeyDistribution::uniform, 100), c), DomainError);
  EXPECT_THROW(parse_pick_policy("random"), DomainError);
}
