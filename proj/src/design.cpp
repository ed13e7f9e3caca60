#include "vat/design.hpp"

#include "vat/errors.hpp"

namespace vat {

std::string_view to_string(Compaction c) {
  return c == Compaction::leveling ? "leveling" : "tiering";
}

std::string_view to_string(Placement p) {
  return p == Placement::in_place ? "in-place" : "value-log";
}

std::string_view to_string(Granularity g) {
  return g == Granularity::full_level ? "full-level" : "per-sst";
}

std::string to_string(const Design& d) {
  std::string out{to_string(d.compaction)};
  if (d.uses_log()) out += "-log";
  if (d.per_sst()) out += "-per-sst";
  return out;
}

Design parse_design(std::string_view text) {
  Design d;
  auto consume_suffix = [&text](std::string_view suffix) {
    if (text.size() >= suffix.size() && text.substr(text.size() - suffix.size()) == suffix) {
      text.remove_suffix(suffix.size());
      return true;
    }
    return false;
  };
  if (consume_suffix("-per-sst")) d.granularity = Granularity::per_sst;
  if (consume_suffix("-log")) d.placement = Placement::value_log;
  if (text == "leveling") {
    d.compaction = Compaction::leveling;
  } else if (text == "tiering") {
    d.compaction = Compaction::tiering;
  } else {
    throw DomainError("unknown design '" + std::string(text) +
                      "' (expected leveling|tiering with optional -log and -per-sst suffixes)");
  }
  return d;
}

}  // namespace vat
