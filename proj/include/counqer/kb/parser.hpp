#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "counqer/kb/triple.hpp"

namespace counqer::kb {

enum class TripleFormat { NTriples, Tsv };

TripleFormat parse_format(std::string_view name);

struct ParseError {
  std::size_t line = 0;
  std::string file;
  std::string reason;

  friend bool operator==(const ParseError&, const ParseError&) = default;
};

struct ParseOptions {
  TripleFormat format = TripleFormat::NTriples;
  KbTag kb;
  bool date_heuristic = true;
  /// Name recorded in ParseError::file.
  std::string file_name;
  /// Line number of the first line read; lets a worker parse a chunk of a
  /// larger file split at line boundaries and still report true positions.
  std::size_t first_line = 1;
};

using ParseResult = std::variant<Triple, ParseError>;

/// Streaming triple reader. Holds one line at a time; memory use does not
/// depend on input size.
class TripleReader {
 public:
  TripleReader(std::istream& in, ParseOptions options);

  /// Next triple or error; std::nullopt at end of input. Blank lines and
  /// '#' comment lines are skipped.
  std::optional<ParseResult> next();

 private:
  std::istream& in_;
  ParseOptions options_;
  std::size_t line_no_;
  std::string line_;
};

/// Parses a single non-blank, non-comment line.
ParseResult parse_line(std::string_view line, std::size_t line_no, const ParseOptions& options);

/// Convenience: drains a reader, routing results to the two sinks.
void parse_triples(std::istream& in, const ParseOptions& options,
                   const std::function<void(Triple&&)>& on_triple,
                   const std::function<void(ParseError&&)>& on_error);

/// One N-Triples line (no trailing newline). Literals carry a datatype so
/// that re-parsing yields the same ObjectValue.
std::string to_ntriples(const Triple& t);

/// One TSV line: subject, predicate, object lexical, datatype hint.
std::string to_tsv(const Triple& t);

/// errors.log record: {"line":..,"file":..,"reason":..}
std::string to_json_line(const ParseError& e);

}  // namespace counqer::kb
