#pragma once

// Two replays of multi-level compaction:
//  * simulate_counters tracks only byte counts per level and applies the
//    merge-amplification fraction a as an exact multiplier. It is the
//    executable form of the traffic summations and must agree with them.
//  * simulate_ssts keeps real SST key ranges built from a key stream, merges
//    exactly the overlapping lower-level SSTs and measures a from the
//    resulting compaction trace.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vat/calibration.hpp"
#include "vat/design.hpp"
#include "vat/workload.hpp"

namespace vat {

// How a per-SST compaction chooses its upper-level SST.
enum class PickPolicy {
  round_robin,  // rotating key cursor per level
  min_overlap,  // smallest overlapping lower bytes per upper byte
};

std::string_view to_string(PickPolicy p);
PickPolicy parse_pick_policy(std::string_view text);

struct SimConfig {
  Design design;
  int growth = 10;
  int levels = 3;
  std::uint64_t s0_bytes = 64ULL << 20;
  std::uint64_t sst_bytes = 64ULL << 20;
  // Counter mode only; defaults to 1 for leveling and 0 for tiering.
  std::optional<double> a_override;
  bool drain_at_end = true;
  // Counter mode: accept datasets that are not f^l S_0 by truncating to the
  // largest perfect geometry.
  bool allow_truncate = false;
  // Counter mode, value-log designs: K_l / V_l.
  double key_ratio = 0.01;
  // SST mode.
  PickPolicy pick = PickPolicy::round_robin;
  int ssts_per_compaction = 1;
  bool check_invariants = true;
};

// Throws DomainError unless f >= 2, l >= 1 and sst_bytes divides s0_bytes.
void validate(const SimConfig& config);

struct LevelStats {
  std::uint64_t compactions = 0;  // merges out of this level into the next
  double bytes_read = 0;
  double bytes_written = 0;
  double resident_bytes = 0;  // at the end of the run
};

struct SimReport {
  double bytes_read = 0;
  double bytes_written = 0;
  double dataset_bytes = 0;
  double amplification = 0;        // (read + written) / dataset
  double write_amplification = 0;  // written / dataset
  std::vector<LevelStats> levels;  // index 0 is the in-memory level
  // Counter mode: the a applied. SST mode: mean of the per-compaction
  // estimator over compactions into a non-empty lower level.
  double measured_a = 0;
  double measured_a_clamped = 0;
  std::size_t a_samples = 0;
  std::uint64_t steps = 0;
  int effective_levels = 0;
  double truncated_fraction = 0;
  std::vector<std::string> notes;
  std::vector<CompactionRecord> trace;  // SST mode only
};

SimReport simulate_counters(const SimConfig& config, std::uint64_t dataset_bytes);

SimReport simulate_ssts(const WorkloadSpec& workload, const SimConfig& config);
// Replays an explicit key stream; `workload` supplies sizes only.
SimReport simulate_ssts(const std::vector<std::uint64_t>& keys, const WorkloadSpec& workload,
                        const SimConfig& config);

}  // namespace vat
