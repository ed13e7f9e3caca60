#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace vat {

enum class KeyDistribution {
  uniform,
  zipf,
  // Ascending keys spread evenly over the universe.
  sorted,
  // The sorted key set emitted in groups; each group takes every G-th key
  // so that it spans the whole universe with stride universe / group_pairs.
  sorted_stride,
};

std::string_view to_string(KeyDistribution d);
KeyDistribution parse_distribution(std::string_view text);

inline constexpr double kDefaultZipfTheta = 0.99;

struct WorkloadSpec {
  std::uint64_t num_pairs = 0;
  std::uint32_t key_bytes = 3;
  std::uint32_t value_bytes = 1079;
  KeyDistribution distribution = KeyDistribution::uniform;
  double zipf_theta = kDefaultZipfTheta;
  std::uint64_t key_universe = std::uint64_t{1} << 24;
  std::uint64_t seed = 1;
  // Keys per group for sorted_stride; 0 means one group of num_pairs.
  std::uint64_t group_pairs = 0;

  std::uint64_t pair_bytes() const { return std::uint64_t{key_bytes} + value_bytes; }
  std::uint64_t dataset_bytes() const { return num_pairs * pair_bytes(); }
};

// Throws DomainError when the spec cannot be honored (e.g. a universe
// smaller than the pair count for the sorted modes).
void validate(const WorkloadSpec& spec);

// Deterministic in (spec, seed). Keys lie in [0, key_universe).
std::vector<std::uint64_t> generate_keys(const WorkloadSpec& spec);

}  // namespace vat
