#include "counqer/kb/parser.hpp"

#include <istream>

#include <json.hpp>

#include "counqer/error.hpp"
#include "counqer/kb/classify.hpp"

namespace counqer::kb {

namespace {

constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

struct LineCursor {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\r')) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() const { return pos < s.size() ? s[pos] : '\0'; }
};

struct Term {
  enum class Kind { Iri, Blank, Literal } kind = Kind::Iri;
  std::string value;
  std::optional<std::string> datatype;
};

struct TermError {
  std::string reason;
};

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::variant<Term, TermError> read_iri(LineCursor& c) {
  ++c.pos;  // '<'
  auto close = c.s.find('>', c.pos);
  if (close == std::string_view::npos) return TermError{"unterminated IRI"};
  Term t;
  t.value = std::string(c.s.substr(c.pos, close - c.pos));
  c.pos = close + 1;
  if (t.value.empty()) return TermError{"empty IRI"};
  return t;
}

std::variant<Term, TermError> read_term(LineCursor& c) {
  c.skip_ws();
  const char ch = c.peek();
  if (ch == '<') return read_iri(c);
  if (ch == '_' && c.pos + 1 < c.s.size() && c.s[c.pos + 1] == ':') {
    auto start = c.pos;
    while (c.pos < c.s.size() && c.s[c.pos] != ' ' && c.s[c.pos] != '\t') ++c.pos;
    Term t;
    t.kind = Term::Kind::Blank;
    t.value = std::string(c.s.substr(start, c.pos - start));
    return t;
  }
  if (ch == '"') {
    ++c.pos;
    Term t;
    t.kind = Term::Kind::Literal;
    bool closed = false;
    while (c.pos < c.s.size()) {
      char x = c.s[c.pos++];
      if (x == '"') {
        closed = true;
        break;
      }
      if (x != '\\') {
        t.value += x;
        continue;
      }
      if (c.pos >= c.s.size()) break;
      char e = c.s[c.pos++];
      switch (e) {
        case 'n': t.value += '\n'; break;
        case 't': t.value += '\t'; break;
        case 'r': t.value += '\r'; break;
        case 'b': t.value += '\b'; break;
        case 'f': t.value += '\f'; break;
        case '"': t.value += '"'; break;
        case '\'': t.value += '\''; break;
        case '\\': t.value += '\\'; break;
        case 'u':
        case 'U': {
          const std::size_t n = e == 'u' ? 4 : 8;
          if (c.pos + n > c.s.size()) return TermError{"bad unicode escape"};
          unsigned long cp = 0;
          for (std::size_t i = 0; i < n; ++i) {
            char h = c.s[c.pos + i];
            cp <<= 4;
            if (h >= '0' && h <= '9') cp |= static_cast<unsigned long>(h - '0');
            else if (h >= 'a' && h <= 'f') cp |= static_cast<unsigned long>(h - 'a' + 10);
            else if (h >= 'A' && h <= 'F') cp |= static_cast<unsigned long>(h - 'A' + 10);
            else return TermError{"bad unicode escape"};
          }
          c.pos += n;
          append_utf8(t.value, cp);
          break;
        }
        default: return TermError{"bad escape sequence"};
      }
    }
    if (!closed) return TermError{"unterminated literal"};
    if (c.peek() == '@') {
      // Language tags carry no datatype; treated as plain strings.
      while (c.pos < c.s.size() && c.s[c.pos] != ' ' && c.s[c.pos] != '\t') ++c.pos;
      t.datatype = std::string(kXsd) + "string";
    } else if (c.s.substr(c.pos).starts_with("^^")) {
      c.pos += 2;
      if (c.peek() == '<') {
        auto dt = read_iri(c);
        if (auto* err = std::get_if<TermError>(&dt)) return *err;
        t.datatype = std::get<Term>(dt).value;
      } else {
        auto start = c.pos;
        while (c.pos < c.s.size() && c.s[c.pos] != ' ' && c.s[c.pos] != '\t') ++c.pos;
        t.datatype = std::string(c.s.substr(start, c.pos - start));
      }
    }
    return t;
  }
  return TermError{"incomplete statement"};
}

ObjectValue object_from_term(const Term& t, const ParseOptions& o) {
  if (t.kind != Term::Kind::Literal) return Entity{t.value};
  return classify_object(t.value, t.datatype, o.date_heuristic);
}

ParseResult parse_ntriples_line(std::string_view line, std::size_t line_no, const ParseOptions& o) {
  auto fail = [&](std::string reason) { return ParseError{line_no, o.file_name, std::move(reason)}; };
  LineCursor c{line};
  Term parts[3];
  for (int i = 0; i < 3; ++i) {
    if (c.at_end()) return fail("incomplete statement");
    auto term = read_term(c);
    if (auto* err = std::get_if<TermError>(&term)) return fail(err->reason);
    parts[i] = std::get<Term>(std::move(term));
  }
  if (parts[0].kind == Term::Kind::Literal) return fail("subject must be an IRI or blank node");
  if (parts[1].kind != Term::Kind::Iri) return fail("predicate must be an IRI");
  if (c.at_end() || c.peek() != '.') return fail("expected '.' at end of statement");
  ++c.pos;
  if (!c.at_end() && c.peek() != '#') return fail("trailing content after '.'");

  return Triple{std::move(parts[0].value), PredicateId::from_iri(parts[1].value, o.kb),
                object_from_term(parts[2], o)};
}

std::string_view strip_brackets(std::string_view s) {
  if (s.size() >= 2 && s.front() == '<' && s.back() == '>') return s.substr(1, s.size() - 2);
  return s;
}

ParseResult parse_tsv_line(std::string_view line, std::size_t line_no, const ParseOptions& o) {
  auto fail = [&](std::string reason) { return ParseError{line_no, o.file_name, std::move(reason)}; };
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? line.npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (fields.size() < 3) return fail("incomplete statement");
  if (fields.size() > 4) return fail("too many fields");
  auto subject = strip_brackets(fields[0]);
  auto predicate = strip_brackets(fields[1]);
  if (subject.empty()) return fail("empty subject");
  if (predicate.empty()) return fail("empty predicate");

  std::string_view object = fields[2];
  std::optional<std::string_view> hint;
  if (fields.size() == 4 && !fields[3].empty()) hint = fields[3];

  ObjectValue value;
  if (object.size() >= 2 && object.front() == '<' && object.back() == '>') {
    value = Entity{std::string(strip_brackets(object))};
  } else if (object.empty()) {
    return fail("empty object");
  } else {
    value = classify_object(object, hint, o.date_heuristic);
  }
  return Triple{std::string(subject), PredicateId::from_iri(predicate, o.kb), std::move(value)};
}

std::string escape_literal(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string node(std::string_view id) {
  if (id.starts_with("_:")) return std::string(id);
  return "<" + std::string(id) + ">";
}

/// Datatype local name that makes lexical_form() read back to the same value.
std::string_view datatype_of(const ObjectValue& v) {
  switch (kind_of(v)) {
    case ValueKind::Integer: return "integer";
    case ValueKind::Decimal: return "decimal";
    case ValueKind::Date: {
      const auto& d = std::get<Date>(v);
      if (d.day) return "date";
      if (d.month) return "gYearMonth";
      return "gYear";
    }
    case ValueKind::Entity: return "entity";
    default: return "string";
  }
}

bool is_blank(std::string_view line) {
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') return c == '#';
  }
  return true;
}

}  // namespace

TripleFormat parse_format(std::string_view name) {
  if (name == "ntriples" || name == "nt") return TripleFormat::NTriples;
  if (name == "tsv") return TripleFormat::Tsv;
  throw ConfigError("unknown triple format: " + std::string(name));
}

ParseResult parse_line(std::string_view line, std::size_t line_no, const ParseOptions& options) {
  if (options.format == TripleFormat::Tsv) return parse_tsv_line(line, line_no, options);
  return parse_ntriples_line(line, line_no, options);
}

TripleReader::TripleReader(std::istream& in, ParseOptions options)
    : in_(in), options_(std::move(options)), line_no_(options_.first_line - 1) {}

std::optional<ParseResult> TripleReader::next() {
  while (std::getline(in_, line_)) {
    ++line_no_;
    if (is_blank(line_)) continue;
    return parse_line(line_, line_no_, options_);
  }
  return std::nullopt;
}

void parse_triples(std::istream& in, const ParseOptions& options,
                   const std::function<void(Triple&&)>& on_triple,
                   const std::function<void(ParseError&&)>& on_error) {
  TripleReader reader(in, options);
  while (auto r = reader.next()) {
    if (auto* t = std::get_if<Triple>(&*r)) {
      on_triple(std::move(*t));
    } else {
      on_error(std::get<ParseError>(std::move(*r)));
    }
  }
}

std::string to_ntriples(const Triple& t) {
  std::string out = node(t.subject) + " <" + t.predicate.iri + "> ";
  if (const auto* e = std::get_if<Entity>(&t.object)) {
    out += node(e->id);
  } else {
    out += '"' + escape_literal(lexical_form(t.object)) + "\"^^<" + std::string(kXsd) +
           std::string(datatype_of(t.object)) + ">";
  }
  out += " .";
  return out;
}

std::string to_tsv(const Triple& t) {
  std::string out = t.subject + "\t" + t.predicate.iri + "\t";
  if (const auto* e = std::get_if<Entity>(&t.object)) {
    out += "<" + e->id + ">\tentity";
  } else {
    std::string lex = lexical_form(t.object);
    for (auto& ch : lex) {
      if (ch == '\t' || ch == '\n') ch = ' ';
    }
    out += lex + "\t" + std::string(datatype_of(t.object));
  }
  return out;
}

std::string to_json_line(const ParseError& e) {
  nlohmann::json j;
  j["line"] = e.line;
  j["file"] = e.file;
  j["reason"] = e.reason;
  return j.dump();
}

}  // namespace counqer::kb
