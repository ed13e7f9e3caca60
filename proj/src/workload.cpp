#include "vat/workload.hpp"

#include <cmath>
#include <random>
#include <string>

#include "vat/errors.hpp"

namespace vat {

namespace {

std::uint64_t fnv1a64(std::uint64_t v) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int i = 0; i < 8; ++i) {
    h ^= v & 0xff;
    h *= 0x100000001b3ULL;
    v >>= 8;
  }
  return h;
}

// Gray et al. zipfian over ranks [0, n), the generator YCSB uses. Ranks are
// hashed onto the universe so the hot keys are not clustered at its low end.
class ZipfGenerator {
 public:
  ZipfGenerator(std::uint64_t n, double theta) : n_(n), theta_(theta) {
    zetan_ = zeta(n_, theta_);
    const double zeta2 = zeta(2, theta_);
    alpha_ = 1.0 / (1.0 - theta_);
    eta_ = (1.0 - std::pow(2.0 / static_cast<double>(n_), 1.0 - theta_)) / (1.0 - zeta2 / zetan_);
  }

  std::uint64_t next(std::mt19937_64& rng) const {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double uz = u * zetan_;
    if (uz < 1.0) return 0;
    if (uz < 1.0 + std::pow(0.5, theta_)) return 1;
    const auto rank = static_cast<std::uint64_t>(static_cast<double>(n_) *
                                                 std::pow(eta_ * u - eta_ + 1.0, alpha_));
    return rank < n_ ? rank : n_ - 1;
  }

 private:
  static double zeta(std::uint64_t n, double theta) {
    double sum = 0.0;
    for (std::uint64_t i = 1; i <= n; ++i) sum += 1.0 / std::pow(static_cast<double>(i), theta);
    return sum;
  }

  std::uint64_t n_;
  double theta_;
  double zetan_ = 0;
  double alpha_ = 0;
  double eta_ = 0;
};

std::uint64_t evenly_spaced(std::uint64_t index, std::uint64_t count, std::uint64_t universe) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(index) * universe / count);
}

}  // namespace

std::string_view to_string(KeyDistribution d) {
  switch (d) {
    case KeyDistribution::uniform: return "uniform";
    case KeyDistribution::zipf: return "zipf";
    case KeyDistribution::sorted: return "sorted";
    case KeyDistribution::sorted_stride: return "sorted-stride";
  }
  return "uniform";
}

KeyDistribution parse_distribution(std::string_view text) {
  if (text == "uniform") return KeyDistribution::uniform;
  if (text == "zipf") return KeyDistribution::zipf;
  if (text == "sorted") return KeyDistribution::sorted;
  if (text == "sorted-stride" || text == "sorted_stride") return KeyDistribution::sorted_stride;
  throw DomainError("unknown key distribution '" + std::string(text) +
                    "' (expected uniform|zipf|sorted|sorted-stride)");
}

void validate(const WorkloadSpec& spec) {
  if (spec.num_pairs == 0) throw DomainError("workload needs at least one pair");
  if (spec.key_bytes == 0) throw DomainError("key size must be positive");
  if (spec.key_universe == 0) throw DomainError("key universe must be non-empty");
  const bool ordered = spec.distribution == KeyDistribution::sorted ||
                       spec.distribution == KeyDistribution::sorted_stride;
  if (ordered && spec.key_universe < spec.num_pairs) {
    throw DomainError("key universe (" + std::to_string(spec.key_universe) +
                      ") is smaller than the number of pairs (" + std::to_string(spec.num_pairs) +
                      ") required for sorted coverage");
  }
  if (spec.distribution == KeyDistribution::zipf && !(spec.zipf_theta > 0.0 && spec.zipf_theta < 1.0)) {
    throw DomainError("zipf theta must lie in (0, 1)");
  }
  if (spec.group_pairs > spec.num_pairs) throw DomainError("group larger than the workload");
}

std::vector<std::uint64_t> generate_keys(const WorkloadSpec& spec) {
  validate(spec);
  const std::uint64_t n = spec.num_pairs;
  const std::uint64_t universe = spec.key_universe;
  std::vector<std::uint64_t> keys;
  keys.reserve(n);

  switch (spec.distribution) {
    case KeyDistribution::uniform: {
      std::mt19937_64 rng(spec.seed);
      for (std::uint64_t i = 0; i < n; ++i) keys.push_back(rng() % universe);
      break;
    }
    case KeyDistribution::zipf: {
      std::mt19937_64 rng(spec.seed);
      const ZipfGenerator zipf(universe, spec.zipf_theta);
      for (std::uint64_t i = 0; i < n; ++i) keys.push_back(fnv1a64(zipf.next(rng)) % universe);
      break;
    }
    case KeyDistribution::sorted: {
      for (std::uint64_t i = 0; i < n; ++i) keys.push_back(evenly_spaced(i, n, universe));
      break;
    }
    case KeyDistribution::sorted_stride: {
      const std::uint64_t group = spec.group_pairs == 0 ? n : spec.group_pairs;
      const std::uint64_t groups = (n + group - 1) / group;
      for (std::uint64_t g = 0; g < groups; ++g) {
        for (std::uint64_t idx = g; idx < n; idx += groups) keys.push_back(evenly_spaced(idx, n, universe));
      }
      break;
    }
  }
  return keys;
}

}  // namespace vat
