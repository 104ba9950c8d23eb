#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace counqer::kb {

/// Source knowledge base of a predicate. The four named KBs have fixed
/// spellings; anything else is carried as a custom name.
class KbTag {
 public:
  enum class Kind { DbpRaw, DbpMap, WdTruthy, Freebase, Custom };

  KbTag() = default;
  explicit KbTag(Kind kind, std::string custom = {});

  /// Accepts "DBP-raw", "DBP-map", "WD-truthy", "Freebase"; any other
  /// non-empty name becomes a custom tag.
  static KbTag parse(std::string_view name);

  Kind kind() const { return kind_; }
  std::string name() const;

  friend bool operator==(const KbTag& a, const KbTag& b) { return a.name() == b.name(); }
  friend auto operator<=>(const KbTag& a, const KbTag& b) { return a.name() <=> b.name(); }

 private:
  Kind kind_ = Kind::Custom;
  std::string custom_ = "custom";
};

/// Marker appended to the IRI of an inverse predicate.
inline constexpr std::string_view kInverseMarker = "^-1";

/// Identity of a predicate. Inverse predicates carry the forward label.
struct PredicateId {
  std::string iri;
  std::string base_label;
  bool inverted = false;
  KbTag kb;

  /// Builds a predicate id from an IRI. A trailing "^-1" marks an inverse;
  /// the label is the IRI local name with the marker removed.
  static PredicateId from_iri(std::string_view iri, KbTag kb = {});

  /// IRI of the forward predicate (the marker stripped).
  std::string forward_iri() const;

  /// The inverse predicate. Throws if this predicate is already inverted.
  PredicateId inverse() const;

  friend bool operator==(const PredicateId& a, const PredicateId& b) {
    return a.iri == b.iri && a.kb == b.kb;
  }
  friend auto operator<=>(const PredicateId& a, const PredicateId& b) {
    if (auto c = a.kb <=> b.kb; c != 0) return c;
    return a.iri <=> b.iri;
  }
};

/// Human-readable local name of an IRI (text after the last '/' or '#').
std::string local_name(std::string_view iri);

struct Entity {
  std::string id;
  friend bool operator==(const Entity&, const Entity&) = default;
};

struct Integer {
  std::int64_t value = 0;
  friend bool operator==(const Integer&, const Integer&) = default;
};

struct Decimal {
  double value = 0.0;
  friend bool operator==(const Decimal&, const Decimal&) = default;
};

/// Calendar date, a year-month, or a bare year.
struct Date {
  int year = 0;
  std::optional<int> month;
  std::optional<int> day;

  std::string to_string() const;
  friend bool operator==(const Date&, const Date&) = default;
};

struct Text {
  std::string value;
  friend bool operator==(const Text&, const Text&) = default;
};

/// Comma-separated string of at least two trimmed, non-empty items.
struct CsvList {
  std::vector<std::string> items;
  friend bool operator==(const CsvList&, const CsvList&) = default;
};

using ObjectValue = std::variant<Entity, Integer, Decimal, Date, Text, CsvList>;

/// Index of the variant bucket, in declaration order.
enum class ValueKind { Entity = 0, Integer, Decimal, Date, Text, CsvList };
inline constexpr int kValueKinds = 6;

inline ValueKind kind_of(const ObjectValue& v) { return static_cast<ValueKind>(v.index()); }
std::string_view kind_name(ValueKind kind);

/// Canonical lexical form (no datatype), e.g. "7", "1969", "Mary, John".
std::string lexical_form(const ObjectValue& v);

struct Triple {
  std::string subject;
  PredicateId predicate;
  ObjectValue object;

  friend bool operator==(const Triple&, const Triple&) = default;
};

}  // namespace counqer::kb
