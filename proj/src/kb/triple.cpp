#include "counqer/kb/triple.hpp"

#include <charconv>
#include <cstdio>

#include "counqer/error.hpp"

namespace counqer::kb {

namespace {

constexpr std::string_view kKindNames[] = {"DBP-raw", "DBP-map", "WD-truthy", "Freebase"};

}  // namespace

KbTag::KbTag(Kind kind, std::string custom) : kind_(kind), custom_(std::move(custom)) {
  if (kind_ == Kind::Custom && custom_.empty()) custom_ = "custom";
}

KbTag KbTag::parse(std::string_view name) {
  for (int i = 0; i < 4; ++i) {
    if (name == kKindNames[i]) return KbTag(static_cast<Kind>(i));
  }
  if (name.empty()) return KbTag();
  return KbTag(Kind::Custom, std::string(name));
}

std::string KbTag::name() const {
  if (kind_ == Kind::Custom) return custom_;
  return std::string(kKindNames[static_cast<int>(kind_)]);
}

std::string local_name(std::string_view iri) {
  auto pos = iri.find_last_of("/#");
  if (pos == std::string_view::npos) return std::string(iri);
  return std::string(iri.substr(pos + 1));
}

PredicateId PredicateId::from_iri(std::string_view iri, KbTag kb) {
  PredicateId p;
  p.iri = std::string(iri);
  p.kb = std::move(kb);
  std::string_view forward = iri;
  if (forward.ends_with(kInverseMarker)) {
    p.inverted = true;
    forward.remove_suffix(kInverseMarker.size());
  }
  p.base_label = local_name(forward);
  return p;
}

std::string PredicateId::forward_iri() const {
  if (!inverted) return iri;
  return iri.substr(0, iri.size() - kInverseMarker.size());
}

PredicateId PredicateId::inverse() const {
  if (inverted) throw Error("inverse of an inverse predicate requested: " + iri);
  PredicateId p = *this;
  p.iri += kInverseMarker;
  p.inverted = true;
  return p;
}

std::string Date::to_string() const {
  char buf[32];
  if (month && day) {
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, *month, *day);
  } else if (month) {
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, *month);
  } else {
    std::snprintf(buf, sizeof buf, "%04d", year);
  }
  return buf;
}

std::string_view kind_name(ValueKind kind) {
  switch (kind) {
    case ValueKind::Entity: return "entity";
    case ValueKind::Integer: return "integer";
    case ValueKind::Decimal: return "decimal";
    case ValueKind::Date: return "date";
    case ValueKind::Text: return "text";
    case ValueKind::CsvList: return "csv_list";
  }
  return "text";
}

std::string lexical_form(const ObjectValue& v) {
  struct Visitor {
    std::string operator()(const Entity& e) const { return e.id; }
    std::string operator()(const Integer& i) const { return std::to_string(i.value); }
    std::string operator()(const Decimal& d) const {
      char buf[64];
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d.value);
      std::string s(buf, end);
      // Keep a decimal marker so the value never reads back as an integer.
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      return s;
    }
    std::string operator()(const Date& d) const { return d.to_string(); }
    std::string operator()(const Text& t) const { return t.value; }
    std::string operator()(const CsvList& l) const {
      std::string out;
      for (std::size_t i = 0; i < l.items.size(); ++i) {
        if (i) out += ", ";
        out += l.items[i];
      }
      return out;
    }
  };
  return std::visit(Visitor{}, v);
}

}  // namespace counqer::kb
