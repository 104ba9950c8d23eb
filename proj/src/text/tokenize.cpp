#include "counqer/text/tokenize.hpp"

#include <cctype>

#include "counqer/kb/triple.hpp"

namespace counqer::text {

namespace {

bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_word_char(char c) {
  // Non-ASCII bytes belong to words; labels are UTF-8.
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || static_cast<unsigned char>(c) >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize_label(std::string_view label) {
  if (label.ends_with(kb::kInverseMarker)) label.remove_suffix(kb::kInverseMarker.size());

  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };

  for (std::size_t i = 0; i < label.size(); ++i) {
    const char c = label[i];
    if (!is_word_char(c)) {
      flush();
      continue;
    }
    if (!current.empty()) {
      const char prev = label[i - 1];
      const bool lower_to_upper = (is_lower(prev) || is_digit(prev)) && is_upper(c);
      const bool acronym_end = is_upper(prev) && is_upper(c) && i + 1 < label.size() && is_lower(label[i + 1]);
      const bool digit_to_letter = is_digit(prev) && std::isalpha(static_cast<unsigned char>(c));
      if (lower_to_upper || acronym_end || digit_to_letter) flush();
    }
    current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  flush();
  return tokens;
}

}  // namespace counqer::text
