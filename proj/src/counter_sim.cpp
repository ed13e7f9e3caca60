#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "vat/errors.hpp"
#include "vat/simulator.hpp"

namespace vat {

std::string_view to_string(PickPolicy p) {
  return p == PickPolicy::round_robin ? "round-robin" : "min-overlap";
}

PickPolicy parse_pick_policy(std::string_view text) {
  if (text == "round-robin" || text == "round_robin") return PickPolicy::round_robin;
  if (text == "min-overlap" || text == "min_overlap") return PickPolicy::min_overlap;
  throw DomainError("unknown pick policy '" + std::string(text) +
                    "' (expected round-robin|min-overlap)");
}

void validate(const SimConfig& config) {
  if (config.growth < 2) throw DomainError("simulation growth factor must be an integer >= 2");
  if (config.levels < 1) throw DomainError("simulation needs at least one level");
  if (config.s0_bytes == 0) throw DomainError("S_0 must be positive");
  if (config.sst_bytes == 0 || config.sst_bytes > config.s0_bytes ||
      config.s0_bytes % config.sst_bytes != 0) {
    throw GeometryError("SST size must divide S_0 (S_0 = " + std::to_string(config.s0_bytes) +
                        ", B = " + std::to_string(config.sst_bytes) + ")");
  }
  if (config.a_override && !(*config.a_override >= 0.0 && *config.a_override <= 1.0)) {
    throw DomainError("merge amplification a must lie in [0, 1]");
  }
  if (config.design.uses_log() && !(config.key_ratio > 0.0)) {
    throw DomainError("value-log designs need a positive key ratio p");
  }
  if (config.ssts_per_compaction < 1) throw DomainError("a compaction picks at least one SST");
}

namespace {

class CounterReplay {
 public:
  CounterReplay(const SimConfig& config, int levels, double a)
      : config_(config), levels_(levels), a_(a), content_(static_cast<std::size_t>(levels) + 1, 0.0) {
    // Levels hold keys only in value-log designs.
    scale_ = config.design.uses_log() ? config.key_ratio / (config.key_ratio + 1.0) : 1.0;
    stats_.resize(content_.size());
  }

  void run_full_level(std::uint64_t flushes) {
    const auto s0 = static_cast<double>(config_.s0_bytes);
    for (std::uint64_t n = 0; n < flushes; ++n) {
      append_log(s0);
      content_[0] = s0;
      merge_level(0);
      for (int i = 1; i < levels_; ++i) {
        if (content_[idx(i)] >= capacity(i)) merge_level(i);
      }
    }
    if (config_.drain_at_end) {
      for (int i = 1; i < levels_; ++i) {
        if (content_[idx(i)] > 0) merge_level(i);
      }
    }
  }

  void run_per_sst(std::uint64_t flushes) {
    const double ssts_per_s0 =
        static_cast<double>(config_.s0_bytes / config_.sst_bytes);
    sst_bytes_ = static_cast<double>(config_.sst_bytes);
    // Content counted in SSTs here.
    const std::uint64_t arrivals = flushes * (config_.s0_bytes / config_.sst_bytes);
    for (std::uint64_t n = 0; n < arrivals; ++n) {
      append_log(sst_bytes_);
      content_[0] += 1;
      if (content_[0] > ssts_per_s0) move_sst(0);
    }
    if (config_.drain_at_end) {
      for (int i = 0; i < levels_; ++i) {
        while (content_[idx(i)] > 0) move_sst(i);
      }
    }
    for (double& c : content_) c *= sst_bytes_;
  }

  SimReport finish(double dataset) {
    SimReport report;
    report.dataset_bytes = dataset;
    report.levels = stats_;
    for (std::size_t i = 0; i < content_.size(); ++i) {
      report.levels[i].resident_bytes = content_[i] * scale_;
      report.bytes_read += stats_[i].bytes_read;
      report.bytes_written += stats_[i].bytes_written;
    }
    report.bytes_written += log_bytes_;
    report.amplification = (report.bytes_read + report.bytes_written) / dataset;
    report.write_amplification = report.bytes_written / dataset;
    report.measured_a = a_;
    report.measured_a_clamped = a_;
    report.steps = steps_;
    report.effective_levels = levels_;
    return report;
  }

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

  double capacity(int i) const {
    return static_cast<double>(config_.s0_bytes) * std::pow(static_cast<double>(config_.growth), i);
  }

  void append_log(double bytes) {
    if (config_.design.uses_log()) log_bytes_ += bytes;
  }

  // Whole of L_i into L_{i+1}: L_i is read (unless in memory) and written,
  // a of the current L_{i+1} content is read and written.
  void merge_level(int i) {
    const double upper = content_[idx(i)] * scale_;
    const double lower = a_ * content_[idx(i + 1)] * scale_;
    LevelStats& s = stats_[idx(i)];
    s.bytes_read += (i == 0 ? 0.0 : upper) + lower;
    s.bytes_written += upper + lower;
    ++s.compactions;
    ++steps_;
    content_[idx(i + 1)] += content_[idx(i)];
    content_[idx(i)] = 0;
  }

  // One SST of L_i into L_{i+1}. The lower level overlaps the moved SST in
  // proportion to its share of L_i's key space: (content + 1) B / n_i, capped
  // at the lower level's capacity.
  void move_sst(int i) {
    const double ssts_i = capacity(i) / static_cast<double>(config_.sst_bytes);
    const bool lower_is_last = i + 1 == levels_;
    const double lower_cap = lower_is_last ? std::numeric_limits<double>::infinity()
                                           : capacity(i + 1) / static_cast<double>(config_.sst_bytes);
    const double overlap_ssts = std::min(content_[idx(i + 1)] + 1.0, lower_cap);
    const double upper = sst_bytes_ * scale_;
    const double lower = a_ * overlap_ssts * sst_bytes_ / ssts_i * scale_;
    LevelStats& s = stats_[idx(i)];
    s.bytes_read += (i == 0 ? 0.0 : upper) + lower;
    s.bytes_written += upper + lower;
    ++s.compactions;
    ++steps_;
    content_[idx(i)] -= 1;
    content_[idx(i + 1)] += 1;
    if (!lower_is_last && content_[idx(i + 1)] > lower_cap) move_sst(i + 1);
  }

  const SimConfig& config_;
  int levels_;
  double a_;
  double scale_ = 1.0;
  double sst_bytes_ = 0;
  double log_bytes_ = 0;
  std::uint64_t steps_ = 0;
  std::vector<double> content_;
  std::vector<LevelStats> stats_;
};

unsigned __int128 perfect_size(std::uint64_t s0, int f, int l) {
  unsigned __int128 size = s0;
  for (int i = 0; i < l; ++i) {
    size *= static_cast<unsigned>(f);
    if (size > std::numeric_limits<std::uint64_t>::max()) return size;
  }
  return size;
}

}  // namespace

SimReport simulate_counters(const SimConfig& config, std::uint64_t dataset_bytes) {
  validate(config);
  if (dataset_bytes == 0) throw DomainError("dataset must be non-empty");

  std::vector<std::string> notes;
  double a = config.a_override.value_or(1.0);
  if (config.design.is_tiering()) {
    if (config.a_override && *config.a_override != 0.0) {
      notes.push_back("tiering never merges into the lower level; a forced to 0");
    }
    a = 0.0;
  }

  int levels = config.levels;
  std::uint64_t effective = dataset_bytes;
  const unsigned __int128 perfect = perfect_size(config.s0_bytes, config.growth, levels);
  if (perfect != dataset_bytes) {
    if (!config.allow_truncate) {
      throw GeometryError("dataset of " + std::to_string(dataset_bytes) +
                          " bytes is not f^l S_0 = " +
                          (perfect > std::numeric_limits<std::uint64_t>::max()
                               ? std::string("(overflow)")
                               : std::to_string(static_cast<std::uint64_t>(perfect))) +
                          " bytes; enable truncation to use the largest perfect geometry");
    }
    while (levels >= 1 && perfect_size(config.s0_bytes, config.growth, levels) > dataset_bytes) {
      --levels;
    }
    if (levels < 1) {
      throw GeometryError("dataset smaller than f S_0; no perfect geometry fits");
    }
    effective = static_cast<std::uint64_t>(perfect_size(config.s0_bytes, config.growth, levels));
    notes.push_back("dataset truncated from " + std::to_string(dataset_bytes) + " to " +
                    std::to_string(effective) + " bytes (" + std::to_string(levels) + " levels)");
  }

  const std::uint64_t flushes = effective / config.s0_bytes;
  CounterReplay replay(config, levels, a);
  if (config.design.per_sst() && !config.design.is_tiering()) {
    replay.run_per_sst(flushes);
  } else {
    if (config.design.per_sst()) notes.push_back("per-SST tiering replayed as full-level tiering");
    replay.run_full_level(flushes);
  }
  SimReport report = replay.finish(static_cast<double>(effective));
  report.truncated_fraction =
      static_cast<double>(dataset_bytes - effective) / static_cast<double>(dataset_bytes);
  report.notes = std::move(notes);
  return report;
}

}  // namespace vat
