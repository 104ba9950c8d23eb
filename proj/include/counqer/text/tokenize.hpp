#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace counqer::text {

/// Splits a predicate label into lowercase word tokens at case changes
/// (lower->upper, and the last capital of an acronym before a lowercase
/// run), digit->letter transitions, and any non-alphanumeric character.
/// The inverse marker "^-1" is dropped, so p and p^-1 tokenize alike.
std::vector<std::string> tokenize_label(std::string_view label);

}  // namespace counqer::text
