#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace counqer::text {

enum class Number { Singular, Plural };

/// Singular and plural forms of a label. The forms are the label's token
/// phrase up to and including its last noun, with that noun inflected
/// ("numberOfChildren" -> "number of child" / "number of children").
struct InflectedForms {
  std::string singular;
  std::string plural;
  std::string last_noun;
  Number number = Number::Singular;
};

/// Grammatical number of a single lowercase word.
Number detect_number(std::string_view word);
std::string singularize(std::string_view word);
std::string pluralize(std::string_view word);

/// Index of the last noun in a token sequence: the rightmost token tagged as
/// a noun by a small lexicon-based tagger, falling back to the last token.
std::size_t last_noun_index(std::span<const std::string> tokens);

/// Throws counqer::Error("no inflectable token") for a label with no tokens.
InflectedForms inflect(std::string_view label);

/// Irregular (singular, plural) rows, including invariant nouns.
struct IrregularNoun {
  std::string_view singular;
  std::string_view plural;
};
std::span<const IrregularNoun> irregular_nouns();

}  // namespace counqer::text
