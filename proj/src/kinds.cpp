#include "counqer/kinds.hpp"

#include <string>

#include "counqer/error.hpp"

namespace counqer {

std::string_view kind_name(SetKind k) { return k == SetKind::Counting ? "counting" : "enumerating"; }

SetKind parse_kind(std::string_view name) {
  if (name == "counting") return SetKind::Counting;
  if (name == "enumerating") return SetKind::Enumerating;
  throw ConfigError("unknown set predicate kind: " + std::string(name));
}

std::string_view direction_name(Direction d) {
  return d == Direction::CountingToEnumerating ? "counting_to_enumerating" : "enumerating_to_counting";
}

Direction parse_direction(std::string_view name) {
  if (name == "counting_to_enumerating" || name == "c2e") return Direction::CountingToEnumerating;
  if (name == "enumerating_to_counting" || name == "e2c") return Direction::EnumeratingToCounting;
  throw ConfigError("unknown alignment direction: " + std::string(name));
}

}  // namespace counqer
