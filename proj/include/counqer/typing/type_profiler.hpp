#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "counqer/kb/triple.hpp"
#include "counqer/kb/triple_index.hpp"

namespace counqer::typing {

/// High-level classes, in tie-break order. Literal is only ever a range.
enum class HighLevelClass { Person = 0, Place, Organization, Event, Work, Thing, Literal };

std::string_view class_name(HighLevelClass c);
/// Accepts the class names above plus the spelling "Organisation".
std::optional<HighLevelClass> parse_class(std::string_view name);

/// entity -> class lookup, loaded from an `entity<TAB>class` file.
class ClassMap {
 public:
  ClassMap() = default;
  static ClassMap load(std::istream& in);
  static ClassMap load_file(const std::string& path);

  void set(std::string entity, HighLevelClass c);
  std::optional<HighLevelClass> find(std::string_view entity) const;
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<std::string, HighLevelClass> map_;
};

enum class Role { Subject, Object };

/// Uniform sample without replacement of min(n, population) items, by
/// reservoir sampling over `population` in the given order. Deterministic for
/// a seed.
std::vector<std::string> reservoir_sample(std::span<const std::string> population, std::size_t n,
                                          std::uint64_t seed);

/// Distinct subjects (or entity objects) of a predicate, sorted, then
/// reservoir-sampled. Object role on a literal-only predicate gives [].
std::vector<std::string> sample_entities(const kb::TripleIndex& index, std::string_view predicate_iri,
                                         Role role, std::size_t n, std::uint64_t seed);

/// Most frequent class; unmapped entities count as Thing, an empty list is
/// Literal, ties go to the earlier class in enum order.
HighLevelClass majority_class(std::span<const std::string> entities, const ClassMap& class_map);

struct TypeProfile {
  kb::PredicateId predicate;
  HighLevelClass domain = HighLevelClass::Thing;
  HighLevelClass range = HighLevelClass::Literal;
  std::size_t domain_sample_size = 0;
  std::size_t range_sample_size = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const TypeProfile&, const TypeProfile&) = default;
};

TypeProfile profile_predicate(const kb::TripleIndex& index, std::string_view predicate_iri,
                              const ClassMap& class_map, std::size_t samples, std::uint64_t seed);

nlohmann::json to_json(const TypeProfile& p);
TypeProfile profile_from_json(const nlohmann::json& j);

}  // namespace counqer::typing
