#pragma once

#include <optional>
#include <string_view>

#include "counqer/kb/triple.hpp"

namespace counqer::kb {

/// Datatype hints recognised on literals, after normalising the IRI or
/// prefixed name (xsd:integer, <...#gYear>, "decimal", ...).
enum class DatatypeHint { None, Entity, Integer, Decimal, Date, String };

DatatypeHint parse_datatype_hint(std::string_view hint);

/// Years in this range are read as dates when the date heuristic is on.
inline constexpr int kDateHeuristicMin = 1900;
inline constexpr int kDateHeuristicMax = 2020;

/// Classifies a literal into an ObjectValue. Total: anything that does not
/// match a more specific pattern is Text. A hint is honoured whenever the
/// lexical form parses under it; otherwise the untyped rules apply.
ObjectValue classify_object(std::string_view lexical, std::optional<std::string_view> datatype_hint,
                            bool date_heuristic);

// Lexical pattern checks, exposed for the tokenizer and tests.
std::optional<std::int64_t> parse_integer(std::string_view s);
std::optional<double> parse_decimal(std::string_view s);
std::optional<Date> parse_date(std::string_view s);
std::optional<CsvList> parse_csv_list(std::string_view s);

}  // namespace counqer::kb
