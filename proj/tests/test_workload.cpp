#include <algorithm>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "vat/errors.hpp"
#include "vat/workload.hpp"

using namespace vat;

namespace {

WorkloadSpec spec(KeyDistribution d, std::uint64_t n, std::uint64_t universe = 1 << 20) {
  WorkloadSpec w;
  w.num_pairs = n;
  w.distribution = d;
  w.key_universe = universe;
  return w;
}

}  // namespace

TEST(Workload, PairBytes) {
  WorkloadSpec w;
  w.num_pairs = 10;
  EXPECT_EQ(w.pair_bytes(), 1082u);
  EXPECT_EQ(w.dataset_bytes(), 10820u);
}

TEST(Workload, DeterministicInSeed) {
  for (auto d : {KeyDistribution::uniform, KeyDistribution::zipf}) {
    WorkloadSpec w = spec(d, 5000);
    const auto a = generate_keys(w);
    const auto b = generate_keys(w);
    EXPECT_EQ(a, b);
    w.seed = 2;
    EXPECT_NE(generate_keys(w), a);
  }
}

TEST(Workload, KeysInUniverse) {
  for (auto d : {KeyDistribution::uniform, KeyDistribution::zipf, KeyDistribution::sorted,
                 KeyDistribution::sorted_stride}) {
    const auto keys = generate_keys(spec(d, 4000, 5000));
    ASSERT_EQ(keys.size(), 4000u);
    for (auto k : keys) ASSERT_LT(k, 5000u);
  }
}

TEST(Workload, SortedIsAscendingAndDistinct) {
  const auto keys = generate_keys(spec(KeyDistribution::sorted, 1000, 1 << 24));
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  EXPECT_EQ(std::set<std::uint64_t>(keys.begin(), keys.end()).size(), 1000u);
  EXPECT_EQ(keys.front(), 0u);
  EXPECT_EQ(keys[1], (1u << 24) / 1000);
}

TEST(Workload, StrideGroupsSpanUniverse) {
  WorkloadSpec w = spec(KeyDistribution::sorted_stride, 1000, 1000);
  w.group_pairs = 100;
  const auto keys = generate_keys(w);
  // 10 groups; group g holds g, g + 10, ..., so each group is sorted with stride 10.
  EXPECT_EQ(keys[0], 0u);
  EXPECT_EQ(keys[1], 10u);
  EXPECT_EQ(keys[99], 990u);
  EXPECT_EQ(keys[100], 1u);
  auto sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, generate_keys(spec(KeyDistribution::sorted, 1000, 1000)));
}

TEST(Workload, ZipfIsSkewed) {
  const auto keys = generate_keys(spec(KeyDistribution::zipf, 20000, 1 << 16));
  std::map<std::uint64_t, int> counts;
  for (auto k : keys) ++counts[k];
  int top = 0;
  for (const auto& [_, c] : counts) top = std::max(top, c);
  // A uniform draw would give about 0.3 hits per key.
  EXPECT_GT(top, 500);
}

TEST(Workload, Validation) {
  EXPECT_THROW(generate_keys(spec(KeyDistribution::uniform, 0)), DomainError);
  EXPECT_THROW(generate_keys(spec(KeyDistribution::sorted, 100, 50)), DomainError);
  WorkloadSpec w = spec(KeyDistribution::zipf, 10);
  w.zipf_theta = 1.0;
  EXPECT_THROW(generate_keys(w), DomainError);
  EXPECT_EQ(parse_distribution("sorted-stride"), KeyDistribution::sorted_stride);
  EXPECT_THROW(parse_distribution("gaussian"), DomainError);
}
