#pragma once

#include <string>
#include <string_view>

namespace vat {

enum class Compaction { leveling, tiering };
enum class Placement { in_place, value_log };
enum class Granularity { full_level, per_sst };

// One point of the design space: {leveling | tiering} x {in-place | value-log}
// x {full-level | per-SST}.
struct Design {
  Compaction compaction = Compaction::leveling;
  Placement placement = Placement::in_place;
  Granularity granularity = Granularity::full_level;

  bool uses_log() const { return placement == Placement::value_log; }
  bool is_tiering() const { return compaction == Compaction::tiering; }
  bool per_sst() const { return granularity == Granularity::per_sst; }

  friend bool operator==(const Design&, const Design&) = default;
};

// "leveling", "leveling-log", "tiering", "tiering-log"; "-per-sst" suffix when
// applicable.
std::string to_string(const Design& d);
Design parse_design(std::string_view text);

std::string_view to_string(Compaction c);
std::string_view to_string(Placement p);
std::string_view to_string(Granularity g);

}  // namespace vat
