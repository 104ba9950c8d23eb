#include "counqer/kb/classify.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

namespace counqer::kb {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!is_digit(c)) return false;
  }
  return true;
}

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

DatatypeHint parse_datatype_hint(std::string_view hint) {
  hint = trim(hint);
  if (hint.empty()) return DatatypeHint::None;
  auto pos = hint.find_last_of("#:/");
  std::string_view name = pos == std::string_view::npos ? hint : hint.substr(pos + 1);
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  if (lower == "entity" || lower == "iri" || lower == "anyuri") return DatatypeHint::Entity;
  if (lower == "integer" || lower == "int" || lower == "long" || lower == "short" ||
      lower == "byte" || lower == "nonnegativeinteger" || lower == "positiveinteger" ||
      lower == "negativeinteger" || lower == "nonpositiveinteger" || lower == "unsignedint" ||
      lower == "unsignedlong" || lower == "unsignedshort") {
    return DatatypeHint::Integer;
  }
  if (lower == "decimal" || lower == "double" || lower == "float") return DatatypeHint::Decimal;
  if (lower == "date" || lower == "gyear" || lower == "gyearmonth" || lower == "datetime") {
    return DatatypeHint::Date;
  }
  if (lower == "string" || lower == "langstring" || lower == "text") return DatatypeHint::String;
  return DatatypeHint::None;
}

std::optional<std::int64_t> parse_integer(std::string_view s) {
  s = trim(s);
  std::string_view digits = s;
  if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) digits.remove_prefix(1);
  if (!all_digits(digits)) return std::nullopt;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_decimal(std::string_view s) {
  s = trim(s);
  // [+-]? (digits [. digits?] | . digits) ([eE] [+-]? digits)?
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t int_digits = 0, frac_digits = 0;
  while (i < s.size() && is_digit(s[i])) ++i, ++int_digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && is_digit(s[i])) ++i, ++frac_digits;
  }
  if (int_digits + frac_digits == 0) return std::nullopt;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && is_digit(s[i])) ++i, ++exp_digits;
    if (exp_digits == 0) return std::nullopt;
  }
  if (i != s.size()) return std::nullopt;
  std::string_view body = s;
  if (body.front() == '+') body.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc() || ptr != body.data() + body.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<Date> parse_date(std::string_view s) {
  s = trim(s);
  // YYYY, YYYY-MM, YYYY-MM-DD, optionally followed by a time part.
  if (auto t = s.find('T'); t != std::string_view::npos) s = s.substr(0, t);
  if (s.size() < 4 || !all_digits(s.substr(0, 4))) return std::nullopt;
  Date d;
  d.year = *to_int(s.substr(0, 4));
  if (s.size() == 4) return d;
  if (s.size() != 7 && s.size() != 10) return std::nullopt;
  if (s[4] != '-' || !all_digits(s.substr(5, 2))) return std::nullopt;
  int month = *to_int(s.substr(5, 2));
  if (month < 1 || month > 12) return std::nullopt;
  d.month = month;
  if (s.size() == 7) return d;
  if (s[7] != '-' || !all_digits(s.substr(8, 2))) return std::nullopt;
  int day = *to_int(s.substr(8, 2));
  if (day < 1 || day > 31) return std::nullopt;
  d.day = day;
  return d;
}

std::optional<CsvList> parse_csv_list(std::string_view s) {
  if (s.find(',') == std::string_view::npos) return std::nullopt;
  CsvList list;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    std::string_view item = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
    if (item.empty() || parse_decimal(item)) return std::nullopt;
    list.items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (list.items.size() < 2) return std::nullopt;
  return list;
}

ObjectValue classify_object(std::string_view lexical, std::optional<std::string_view> datatype_hint,
                            bool date_heuristic) {
  const DatatypeHint hint = datatype_hint ? parse_datatype_hint(*datatype_hint) : DatatypeHint::None;
  switch (hint) {
    case DatatypeHint::Entity:
      if (!trim(lexical).empty()) return Entity{std::string(trim(lexical))};
      break;
    case DatatypeHint::Integer:
      if (auto v = parse_integer(lexical)) return Integer{*v};
      break;
    case DatatypeHint::Decimal:
      if (auto v = parse_decimal(lexical)) return Decimal{*v};
      break;
    case DatatypeHint::Date:
      if (auto d = parse_date(lexical)) return *d;
      break;
    case DatatypeHint::String:
      if (auto l = parse_csv_list(lexical)) return *l;
      return Text{std::string(lexical)};
    case DatatypeHint::None:
      break;
  }

  if (auto v = parse_integer(lexical)) {
    if (date_heuristic && *v >= kDateHeuristicMin && *v <= kDateHeuristicMax) {
      return Date{static_cast<int>(*v), std::nullopt, std::nullopt};
    }
    return Integer{*v};
  }
  if (auto v = parse_decimal(lexical)) return Decimal{*v};
  if (auto d = parse_date(lexical); d && d->month) return *d;
  if (auto l = parse_csv_list(lexical)) return *l;
  return Text{std::string(lexical)};
}

}  // namespace counqer::kb
