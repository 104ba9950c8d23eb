#include "counqer/kb/json.hpp"

#include "counqer/error.hpp"
#include "counqer/kb/classify.hpp"

namespace counqer::kb {

nlohmann::json to_json(const ObjectValue& v) {
  nlohmann::json j;
  j["type"] = std::string(kind_name(kind_of(v)));
  struct Visitor {
    nlohmann::json operator()(const Entity& e) const { return e.id; }
    nlohmann::json operator()(const Integer& i) const { return i.value; }
    nlohmann::json operator()(const Decimal& d) const { return d.value; }
    nlohmann::json operator()(const Date& d) const { return d.to_string(); }
    nlohmann::json operator()(const Text& t) const { return t.value; }
    nlohmann::json operator()(const CsvList& l) const { return l.items; }
  };
  j["value"] = std::visit(Visitor{}, v);
  return j;
}

ObjectValue object_value_from_json(const nlohmann::json& j) {
  const auto type = j.at("type").get<std::string>();
  const auto& value = j.at("value");
  if (type == "entity") return Entity{value.get<std::string>()};
  if (type == "integer") return Integer{value.get<std::int64_t>()};
  if (type == "decimal") return Decimal{value.get<double>()};
  if (type == "date") {
    auto d = parse_date(value.get<std::string>());
    if (!d) throw Error("bad date value: " + value.dump());
    return *d;
  }
  if (type == "text") return Text{value.get<std::string>()};
  if (type == "csv_list") return CsvList{value.get<std::vector<std::string>>()};
  throw Error("unknown object value type: " + type);
}

nlohmann::json to_json(const PredicateId& p) {
  return nlohmann::json{{"iri", p.iri}, {"label", p.base_label}, {"inverted", p.inverted}, {"kb", p.kb.name()}};
}

PredicateId predicate_from_json(const nlohmann::json& j) {
  if (j.is_string()) return PredicateId::from_iri(j.get<std::string>());
  PredicateId p = PredicateId::from_iri(j.at("iri").get<std::string>(), KbTag::parse(j.value("kb", "")));
  if (j.contains("label")) p.base_label = j.at("label").get<std::string>();
  return p;
}

}  // namespace counqer::kb
