#include "counqer/text/inflect.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "counqer/error.hpp"
#include "counqer/text/tokenize.hpp"

namespace counqer::text {

namespace {

constexpr IrregularNoun kIrregulars[] = {
    {"child", "children"},       {"grandchild", "grandchildren"}, {"person", "people"},
    {"man", "men"},              {"woman", "women"},              {"foot", "feet"},
    {"tooth", "teeth"},          {"mouse", "mice"},               {"goose", "geese"},
    {"ox", "oxen"},              {"criterion", "criteria"},       {"phenomenon", "phenomena"},
    {"datum", "data"},           {"medium", "media"},             {"alumnus", "alumni"},
    {"radius", "radii"},         {"nucleus", "nuclei"},           {"stimulus", "stimuli"},
    {"cactus", "cacti"},         {"fungus", "fungi"},             {"genus", "genera"},
    {"analysis", "analyses"},    {"thesis", "theses"},            {"crisis", "crises"},
    {"basis", "bases"},          {"axis", "axes"},                {"hypothesis", "hypotheses"},
    {"diagnosis", "diagnoses"},  {"synopsis", "synopses"},        {"index", "indices"},
    {"appendix", "appendices"},  {"matrix", "matrices"},          {"vertex", "vertices"},
    {"life", "lives"},           {"wife", "wives"},               {"knife", "knives"},
    {"leaf", "leaves"},          {"half", "halves"},              {"wolf", "wolves"},
    {"shelf", "shelves"},        {"thief", "thieves"},            {"self", "selves"},
    {"movie", "movies"},         {"cookie", "cookies"},           {"zombie", "zombies"},
    {"status", "statuses"},      {"campus", "campuses"},          {"virus", "viruses"},
    {"bus", "buses"},            {"census", "censuses"},          {"bonus", "bonuses"},
    {"chorus", "choruses"},      {"focus", "foci"},               {"hero", "heroes"},
    {"potato", "potatoes"},      {"echo", "echoes"},              {"volcano", "volcanoes"},
    // Invariant nouns.
    {"series", "series"},        {"species", "species"},          {"staff", "staff"},
    {"sheep", "sheep"},          {"fish", "fish"},                {"deer", "deer"},
    {"aircraft", "aircraft"},    {"spacecraft", "spacecraft"},    {"offspring", "offspring"},
    {"news", "news"},            {"headquarters", "headquarters"}, {"means", "means"},
    {"equipment", "equipment"},  {"information", "information"},  {"personnel", "personnel"},
    {"physics", "physics"},      {"economics", "economics"},      {"mathematics", "mathematics"},
    {"athletics", "athletics"},  {"politics", "politics"},        {"crossroads", "crossroads"},
};

const IrregularNoun* find_singular(std::string_view w) {
  for (const auto& row : kIrregulars) {
    if (row.singular == w) return &row;
  }
  return nullptr;
}

const IrregularNoun* find_plural(std::string_view w) {
  for (const auto& row : kIrregulars) {
    if (row.plural == w) return &row;
  }
  return nullptr;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// Function words and common modifiers that never head a predicate label.
const std::unordered_set<std::string_view>& closed_class() {
  static const std::unordered_set<std::string_view> words = {
      "of",    "in",    "on",      "at",     "by",     "for",   "with",  "from",  "to",    "as",
      "into",  "onto",  "per",     "via",    "about",  "the",   "a",     "an",    "and",   "or",
      "is",    "has",   "had",     "have",   "was",    "were",  "be",    "been",  "are",   "its",
      "his",   "her",   "their",   "this",   "that",   "current", "former", "first", "second",
      "third", "last",  "main",    "max",    "min",    "total", "other", "new",   "old",   "own",
      "de",    "du",    "des",     "le",     "la",     "del",   "da",    "von",   "van",   "than",
      "no",    "not",   "under",   "over",   "after",  "before", "since", "until", "between",
      "within", "without", "among"};
  return words;
}

// Nouns that the suffix rules below would otherwise reject.
const std::unordered_set<std::string_view>& noun_lexicon() {
  static const std::unordered_set<std::string_view> words = {
      "building", "painting",  "recording", "sibling",   "thing",    "king",     "wedding",
      "ring",     "string",    "ceiling",   "meeting",   "setting",  "ending",   "opening",
      "offspring", "spring",   "wing",      "capital",   "hospital", "festival", "official",
      "material", "animal",    "rival",     "criminal",  "signal",   "journal",  "label",
      "principal", "arrival",  "general",   "terminal",  "professional", "individual",
      "relative", "representative", "executive", "detective", "native", "objective",
      "seed",     "need",      "bed",       "speed",     "breed",    "creed",    "shed",
      "feed",     "weed",      "red",       "hundred",   "thousand",
  };
  return words;
}

bool tagged_noun(std::string_view w) {
  if (noun_lexicon().contains(w)) return true;
  if (closed_class().contains(w)) return false;
  if (w.size() <= 1) return false;
  if (std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
  auto suffix = [&](std::string_view s) { return w.size() > s.size() + 2 && w.ends_with(s); };
  // Participles and adjectives.
  if (suffix("ed") || suffix("ing") || suffix("ous") || suffix("ful") || suffix("ive") ||
      suffix("able") || suffix("ible") || suffix("al") || suffix("ic")) {
    return false;
  }
  return true;
}

}  // namespace

std::span<const IrregularNoun> irregular_nouns() { return kIrregulars; }

std::string singularize(std::string_view w) {
  if (const auto* row = find_plural(w)) return std::string(row->singular);
  if (find_singular(w)) return std::string(w);
  const auto n = w.size();
  if (n > 4 && w.ends_with("ies") && !is_vowel(w[n - 4])) return std::string(w.substr(0, n - 3)) + "y";
  if (w.ends_with("sses") || w.ends_with("xes") || w.ends_with("zes") || w.ends_with("ches") ||
      w.ends_with("shes")) {
    return std::string(w.substr(0, n - 2));
  }
  if (n > 3 && w.ends_with('s') && !w.ends_with("ss") && !w.ends_with("us") && !w.ends_with("is")) {
    return std::string(w.substr(0, n - 1));
  }
  return std::string(w);
}

std::string pluralize(std::string_view w) {
  if (const auto* row = find_singular(w)) return std::string(row->plural);
  if (find_plural(w)) return std::string(w);
  const auto n = w.size();
  if (n > 1 && w.ends_with('y') && !is_vowel(w[n - 2])) return std::string(w.substr(0, n - 1)) + "ies";
  if (w.ends_with('s') || w.ends_with('x') || w.ends_with('z') || w.ends_with("ch") || w.ends_with("sh")) {
    return std::string(w) + "es";
  }
  return std::string(w) + "s";
}

Number detect_number(std::string_view w) {
  if (const auto* row = find_plural(w); row && row->plural != row->singular) return Number::Plural;
  if (find_singular(w)) return Number::Singular;
  return singularize(w) != w ? Number::Plural : Number::Singular;
}

std::size_t last_noun_index(std::span<const std::string> tokens) {
  for (std::size_t i = tokens.size(); i-- > 0;) {
    if (tagged_noun(tokens[i])) return i;
  }
  return tokens.empty() ? 0 : tokens.size() - 1;
}

InflectedForms inflect(std::string_view label) {
  const auto tokens = tokenize_label(label);
  if (tokens.empty()) throw Error("no inflectable token");
  const std::size_t idx = last_noun_index(tokens);

  std::string prefix;
  for (std::size_t i = 0; i < idx; ++i) prefix += tokens[i] + " ";

  InflectedForms out;
  out.last_noun = tokens[idx];
  out.number = detect_number(out.last_noun);
  if (out.number == Number::Plural) {
    out.plural = prefix + out.last_noun;
    out.singular = prefix + singularize(out.last_noun);
  } else {
    out.singular = prefix + out.last_noun;
    out.plural = prefix + pluralize(out.last_noun);
  }
  return out;
}

}  // namespace counqer::text
