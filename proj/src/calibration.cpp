#include "vat/calibration.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "vat/errors.hpp"

namespace vat {

namespace {

using nlohmann::json;

constexpr std::array<const char*, 8> kTraceFields = {
    "compaction_id", "level", "msst_u", "msst_l", "tsst_u", "tsst_l", "bytes_read", "bytes_written"};

std::uint64_t& field_ref(CompactionRecord& r, std::size_t i) {
  switch (i) {
    case 0: return r.compaction_id;
    case 1: return r.level;
    case 2: return r.msst_u;
    case 3: return r.msst_l;
    case 4: return r.tsst_u;
    case 5: return r.tsst_l;
    case 6: return r.bytes_read;
    default: return r.bytes_written;
  }
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

template <typename T>
bool parse_uint(std::string_view text, T& out) {
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::optional<double> record_merge_amplification(const CompactionRecord& record) {
  if (record.tsst_l == 0) return std::nullopt;
  const double expected_lower =
      static_cast<double>(record.msst_u) * static_cast<double>(record.tsst_l) /
      static_cast<double>(record.tsst_u);
  return static_cast<double>(record.msst_l) / expected_lower;
}

void validate(const CompactionRecord& record) {
  if (record.msst_u < 1) throw DomainError("compaction record needs msst_u >= 1");
  if (record.msst_u > record.tsst_u) throw DomainError("compaction record has msst_u > tsst_u");
  if (record.msst_l > record.tsst_l) throw DomainError("compaction record has msst_l > tsst_l");
}

TraceStats estimate_a(const std::vector<CompactionRecord>& trace, const EstimateOptions& options) {
  TraceStats stats;
  double weighted_sum = 0;
  double weight_total = 0;
  for (const CompactionRecord& record : trace) {
    validate(record);
    std::optional<double> a = record_merge_amplification(record);
    if (!a) {
      ++stats.empty_lower;
      if (!options.empty_lower_as_zero) continue;
      a = 0.0;
    }
    const double w = options.weighting == Weighting::bytes
                         ? static_cast<double>(record.bytes_read + record.bytes_written)
                         : 1.0;
    stats.values.push_back(*a);
    weighted_sum += w * *a;
    weight_total += w;
  }
  stats.samples = stats.values.size();
  if (stats.samples == 0) {
    throw DomainError("trace has no usable compaction records (" +
                      std::to_string(stats.empty_lower) + " merged into an empty lower level)");
  }
  if (!(weight_total > 0)) throw DomainError("byte-weighted mean needs non-zero byte counts");
  stats.mean_raw = weighted_sum / weight_total;
  stats.mean_clamped = std::clamp(stats.mean_raw, 0.0, 1.0);
  return stats;
}

std::string to_trace_line(const CompactionRecord& record) {
  json j = json::object();
  CompactionRecord copy = record;
  for (std::size_t i = 0; i < kTraceFields.size(); ++i) j[kTraceFields[i]] = field_ref(copy, i);
  return j.dump();
}

CompactionRecord parse_trace_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("expected a JSON object");
  CompactionRecord record;
  for (std::size_t i = 0; i < kTraceFields.size(); ++i) {
    const auto it = j.find(kTraceFields[i]);
    if (it == j.end()) {
      throw std::invalid_argument(std::string("missing field '") + kTraceFields[i] + "'");
    }
    if (!it->is_number_unsigned()) {
      throw std::invalid_argument(std::string("field '") + kTraceFields[i] +
                                  "' must be a non-negative integer");
    }
    field_ref(record, i) = it->get<std::uint64_t>();
  }
  if (j.size() != kTraceFields.size()) {
    for (const auto& item : j.items()) {
      if (std::find_if(kTraceFields.begin(), kTraceFields.end(), [&](const char* f) {
            return item.key() == f;
          }) == kTraceFields.end()) {
        throw std::invalid_argument("unexpected field '" + item.key() + "'");
      }
    }
  }
  try {
    validate(record);
  } catch (const DomainError& e) {
    throw std::invalid_argument(e.what());
  }
  return record;
}

TraceReadResult read_trace(std::istream& in, const std::string& name, bool lenient) {
  TraceReadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      result.records.push_back(parse_trace_line(line));
    } catch (const std::invalid_argument& e) {
      if (!lenient) throw ParseError(name, line_no, e.what());
      result.problems.push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return result;
}

TraceReadResult read_trace_file(const std::string& path, bool lenient) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file '" + path + "'");
  return read_trace(in, path, lenient);
}

void write_trace(std::ostream& out, const std::vector<CompactionRecord>& records) {
  for (const CompactionRecord& r : records) out << to_trace_line(r) << '\n';
}

std::vector<std::uint32_t> DeviceProfile::queue_depths() const {
  std::set<std::uint32_t> depths;
  for (const ProfileRow& row : rows) depths.insert(row.queue_depth);
  return {depths.begin(), depths.end()};
}

void validate(DeviceProfile& profile) {
  if (!(profile.sequential_peak_bps > 0)) throw DomainError("sequential peak must be positive");
  if (profile.rows.empty()) throw DomainError("device profile has no rows");
  std::sort(profile.rows.begin(), profile.rows.end(), [](const ProfileRow& x, const ProfileRow& y) {
    return std::tie(x.queue_depth, x.request_bytes) < std::tie(y.queue_depth, y.request_bytes);
  });
  for (std::size_t i = 0; i < profile.rows.size(); ++i) {
    const ProfileRow& row = profile.rows[i];
    if (!(row.throughput_bps > 0)) throw DomainError("throughput must be positive");
    if (row.throughput_bps > profile.sequential_peak_bps * (1.0 + kProfileSlack)) {
      throw DomainError("throughput " + std::to_string(row.throughput_bps) + " at " +
                        std::to_string(row.request_bytes) +
                        " bytes exceeds the sequential peak beyond measurement slack");
    }
    if (i > 0 && profile.rows[i - 1].queue_depth == row.queue_depth &&
        profile.rows[i - 1].request_bytes == row.request_bytes) {
      throw DomainError("duplicate row for request size " + std::to_string(row.request_bytes));
    }
  }
}

DeviceProfile read_profile(std::istream& in, const std::string& name) {
  DeviceProfile profile;
  profile.name = std::filesystem::path(name).stem().string();
  std::string line;
  std::size_t line_no = 0;
  bool have_peak = false;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (!have_peak) {
      constexpr std::string_view key = "sequential_peak_bps=";
      std::uint64_t peak = 0;
      if (text.rfind(key, 0) != 0 || !parse_uint(std::string_view(text).substr(key.size()), peak)) {
        throw ParseError(name, line_no, "expected 'sequential_peak_bps=<integer>'");
      }
      profile.sequential_peak_bps = static_cast<double>(peak);
      have_peak = true;
      continue;
    }
    if (!have_header) {
      if (text != "request_bytes,queue_depth,throughput_bps") {
        throw ParseError(name, line_no, "expected header 'request_bytes,queue_depth,throughput_bps'");
      }
      have_header = true;
      continue;
    }
    const auto cells = split_csv(text);
    ProfileRow row;
    std::uint64_t throughput = 0;
    if (cells.size() != 3 || !parse_uint(cells[0], row.request_bytes) ||
        !parse_uint(cells[1], row.queue_depth) || !parse_uint(cells[2], throughput)) {
      throw ParseError(name, line_no, "expected three non-negative integers");
    }
    row.throughput_bps = static_cast<double>(throughput);
    profile.rows.push_back(row);
  }
  if (!have_peak || !have_header) throw ParseError(name, line_no, "truncated device profile");
  try {
    validate(profile);
  } catch (const DomainError& e) {
    throw ParseError(name, line_no, e.what());
  }
  return profile;
}

DeviceProfile read_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open device profile '" + path + "'");
  return read_profile(in, path);
}

void write_profile(std::ostream& out, const DeviceProfile& profile) {
  out << "sequential_peak_bps=" << static_cast<std::uint64_t>(profile.sequential_peak_bps) << '\n';
  out << "request_bytes,queue_depth,throughput_bps\n";
  for (const ProfileRow& row : profile.rows) {
    out << row.request_bytes << ',' << row.queue_depth << ','
        << static_cast<std::uint64_t>(row.throughput_bps) << '\n';
  }
}

double estimate_r(const DeviceProfile& profile, std::uint64_t request_bytes,
                  std::uint32_t queue_depth) {
  std::vector<ProfileRow> rows;
  for (const ProfileRow& row : profile.rows) {
    if (row.queue_depth == queue_depth) rows.push_back(row);
  }
  if (rows.empty()) {
    std::string depths;
    for (std::uint32_t d : profile.queue_depths()) {
      depths += (depths.empty() ? "" : ", ") + std::to_string(d);
    }
    throw DomainError("queue depth " + std::to_string(queue_depth) +
                      " not in profile (available: " + depths + ")");
  }
  std::sort(rows.begin(), rows.end(),
            [](const ProfileRow& x, const ProfileRow& y) { return x.request_bytes < y.request_bytes; });
  if (request_bytes < rows.front().request_bytes || request_bytes > rows.back().request_bytes) {
    throw DomainError("request size " + std::to_string(request_bytes) + " outside profile range [" +
                      std::to_string(rows.front().request_bytes) + ", " +
                      std::to_string(rows.back().request_bytes) + "]");
  }
  const auto upper = std::lower_bound(
      rows.begin(), rows.end(), request_bytes,
      [](const ProfileRow& row, std::uint64_t size) { return row.request_bytes < size; });
  double throughput = upper->throughput_bps;
  if (upper->request_bytes != request_bytes) {
    const ProfileRow& lo = *(upper - 1);
    const ProfileRow& hi = *upper;
    const double t = static_cast<double>(request_bytes - lo.request_bytes) /
                     static_cast<double>(hi.request_bytes - lo.request_bytes);
    throughput = lo.throughput_bps + t * (hi.throughput_bps - lo.throughput_bps);
  }
  return std::min(1.0, throughput / profile.sequential_peak_bps);
}

const std::vector<SystemPreset>& preset_systems() {
  static const std::vector<SystemPreset> presets = {
      {"RocksDB", 0.68, 1.0, Design{Compaction::leveling, Placement::in_place, Granularity::full_level}, 8},
      {"Kreon", 0.25, 0.91, Design{Compaction::leveling, Placement::value_log, Granularity::full_level}, 8},
      {"BlobDB", 0.8, 1.0, Design{Compaction::leveling, Placement::value_log, Granularity::full_level}, 8},
      {"PebblesDB", 0.0, 1.0, Design{Compaction::tiering, Placement::in_place, Granularity::full_level}, 8},
  };
  return presets;
}

const SystemPreset& lookup_preset(const std::string& name) {
  for (const SystemPreset& preset : preset_systems()) {
    if (lower(preset.name) == lower(name)) return preset;
  }
  std::string known;
  for (const SystemPreset& preset : preset_systems()) {
    known += (known.empty() ? "" : ", ") + preset.name;
  }
  throw DomainError("unknown system preset '" + name + "' (known: " + known + ")");
}

std::string preset_to_json(const SystemPreset& preset) {
  json j;
  j["name"] = preset.name;
  j["a"] = preset.a;
  j["r"] = preset.r;
  j["design"] = to_string(preset.design);
  j["f"] = preset.growth;
  return j.dump();
}

SystemPreset preset_from_json(const std::string& text) {
  const json j = json::parse(text);
  SystemPreset preset;
  preset.name = j.at("name").get<std::string>();
  preset.a = j.at("a").get<double>();
  preset.r = j.at("r").get<double>();
  preset.design = parse_design(j.at("design").get<std::string>());
  preset.growth = j.at("f").get<double>();
  return preset;
}

}  // namespace vat
