#pragma once

#include <string_view>

namespace counqer {

/// The two variants of set predicates.
enum class SetKind { Enumerating, Counting };
std::string_view kind_name(SetKind k);
SetKind parse_kind(std::string_view name);

/// Alignment direction, named by the kind of the source predicate first.
enum class Direction { CountingToEnumerating, EnumeratingToCounting };
std::string_view direction_name(Direction d);
Direction parse_direction(std::string_view name);

/// Kind of the predicates a direction starts from.
inline SetKind source_kind(Direction d) {
  return d == Direction::CountingToEnumerating ? SetKind::Counting : SetKind::Enumerating;
}

}  // namespace counqer
