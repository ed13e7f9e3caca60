#pragma once

// Estimation of the merge-amplification (a) and achieved-throughput (r)
// parameters from compaction traces and device throughput profiles.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vat/design.hpp"

namespace vat {

struct CompactionRecord {
  std::uint64_t compaction_id = 0;
  std::uint64_t level = 0;  // upper level of the merge
  std::uint64_t msst_u = 0;  // upper-level SSTs taking part
  std::uint64_t msst_l = 0;  // lower-level SSTs taking part
  std::uint64_t tsst_u = 0;  // SSTs in the upper level at merge time
  std::uint64_t tsst_l = 0;  // SSTs in the lower level at merge time
  std::uint64_t bytes_read = 0;
  std::uint64_t bytes_written = 0;

  friend bool operator==(const CompactionRecord&, const CompactionRecord&) = default;
};

// MSST_L / (MSST_U (TSST_L / TSST_U)); nullopt when the lower level is empty.
std::optional<double> record_merge_amplification(const CompactionRecord& record);

enum class Weighting { unweighted, bytes };

struct EstimateOptions {
  Weighting weighting = Weighting::unweighted;
  // Count merges into an empty lower level as a = 0 instead of skipping them.
  bool empty_lower_as_zero = false;
};

struct TraceStats {
  std::vector<double> values;  // per-record a of the records that were used
  double mean_raw = 0;
  double mean_clamped = 0;  // mean_raw clamped to [0, 1]
  std::size_t samples = 0;
  std::size_t empty_lower = 0;  // records with tsst_l == 0
};

// Throws DomainError on an empty usable trace or a record violating
// msst_u >= 1, msst <= tsst.
TraceStats estimate_a(const std::vector<CompactionRecord>& trace, const EstimateOptions& options = {});

void validate(const CompactionRecord& record);

// --- trace files: one JSON object per line ------------------------------------

std::string to_trace_line(const CompactionRecord& record);
// Throws a std::invalid_argument describing the problem.
CompactionRecord parse_trace_line(const std::string& line);

struct TraceReadResult {
  std::vector<CompactionRecord> records;
  std::vector<std::string> problems;  // "line N: ..." for skipped lines in lenient mode
};

// Strict mode throws ParseError at the first malformed line; lenient mode
// skips it and reports it in `problems`.
TraceReadResult read_trace(std::istream& in, const std::string& name, bool lenient = false);
TraceReadResult read_trace_file(const std::string& path, bool lenient = false);
void write_trace(std::ostream& out, const std::vector<CompactionRecord>& records);

// --- device profiles ------------------------------------------------------------

struct ProfileRow {
  std::uint64_t request_bytes = 0;
  std::uint32_t queue_depth = 0;
  double throughput_bps = 0;
};

struct DeviceProfile {
  std::string name;
  std::vector<ProfileRow> rows;  // sorted by (queue_depth, request_bytes)
  double sequential_peak_bps = 0;

  std::vector<std::uint32_t> queue_depths() const;
};

inline constexpr std::uint32_t kDefaultQueueDepth = 32;
inline constexpr double kProfileSlack = 0.02;

// Sorts rows and checks throughput <= peak (1 + slack).
void validate(DeviceProfile& profile);

DeviceProfile read_profile(std::istream& in, const std::string& name);
DeviceProfile read_profile_file(const std::string& path);
void write_profile(std::ostream& out, const DeviceProfile& profile);

// Achieved / sequential throughput at request_bytes, linearly interpolated
// between the rows of one queue depth, capped at 1. No extrapolation.
double estimate_r(const DeviceProfile& profile, std::uint64_t request_bytes,
                  std::uint32_t queue_depth = kDefaultQueueDepth);

// --- system presets (f = 8) -----------------------------------------------------

struct SystemPreset {
  std::string name;
  double a = 0;
  double r = 1;
  Design design;
  double growth = 8;

  friend bool operator==(const SystemPreset&, const SystemPreset&) = default;
};

const std::vector<SystemPreset>& preset_systems();
// Case-insensitive lookup; throws DomainError listing the known names.
const SystemPreset& lookup_preset(const std::string& name);

std::string preset_to_json(const SystemPreset& preset);
SystemPreset preset_from_json(const std::string& text);

}  // namespace vat
