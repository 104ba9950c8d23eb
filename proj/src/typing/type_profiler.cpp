#include "counqer/typing/type_profiler.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>

#include "counqer/error.hpp"
#include "counqer/kb/json.hpp"
#include "counqer/random.hpp"

namespace counqer::typing {

namespace {

constexpr std::array<std::string_view, 7> kClassNames = {"Person", "Place", "Organization", "Event",
                                                         "Work",   "Thing", "Literal"};

}  // namespace

std::string_view class_name(HighLevelClass c) { return kClassNames[static_cast<std::size_t>(c)]; }

std::optional<HighLevelClass> parse_class(std::string_view name) {
  if (name == "Organisation") return HighLevelClass::Organization;
  for (std::size_t i = 0; i < kClassNames.size(); ++i) {
    if (name == kClassNames[i]) return static_cast<HighLevelClass>(i);
  }
  return std::nullopt;
}

ClassMap ClassMap::load(std::istream& in) {
  ClassMap m;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error("class map line " + std::to_string(line_no) + ": expected entity<TAB>class");
    auto cls = parse_class(std::string_view(line).substr(tab + 1));
    if (!cls || *cls == HighLevelClass::Literal) {
      throw Error("class map line " + std::to_string(line_no) + ": unknown class '" + line.substr(tab + 1) + "'");
    }
    m.set(line.substr(0, tab), *cls);
  }
  return m;
}

ClassMap ClassMap::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact("profile", path);
  return load(in);
}

void ClassMap::set(std::string entity, HighLevelClass c) { map_[std::move(entity)] = c; }

std::optional<HighLevelClass> ClassMap::find(std::string_view entity) const {
  auto it = map_.find(std::string(entity));
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> reservoir_sample(std::span<const std::string> population, std::size_t n,
                                          std::uint64_t seed) {
  std::vector<std::string> reservoir;
  if (n == 0) return reservoir;
  reservoir.reserve(std::min(n, population.size()));
  Rng rng(seed);
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (i < n) {
      reservoir.push_back(population[i]);
    } else {
      auto j = rng.index(i + 1);
      if (j < n) reservoir[j] = population[i];
    }
  }
  return reservoir;
}

std::vector<std::string> sample_entities(const kb::TripleIndex& index, std::string_view predicate_iri,
                                         Role role, std::size_t n, std::uint64_t seed) {
  std::set<std::string> distinct;
  for (const kb::Triple* t : index.triples_of(predicate_iri)) {
    if (role == Role::Subject) {
      distinct.insert(t->subject);
    } else if (const auto* e = std::get_if<kb::Entity>(&t->object)) {
      distinct.insert(e->id);
    }
  }
  std::vector<std::string> population(distinct.begin(), distinct.end());
  return reservoir_sample(population, n, seed);
}

HighLevelClass majority_class(std::span<const std::string> entities, const ClassMap& class_map) {
  if (entities.empty()) return HighLevelClass::Literal;
  std::array<std::size_t, 6> tally{};
  for (const auto& e : entities) {
    auto c = class_map.find(e).value_or(HighLevelClass::Thing);
    ++tally[static_cast<std::size_t>(c)];
  }
  // max_element returns the first maximum, which is the enum-order tie-break.
  auto best = std::max_element(tally.begin(), tally.end());
  return static_cast<HighLevelClass>(best - tally.begin());
}

TypeProfile profile_predicate(const kb::TripleIndex& index, std::string_view predicate_iri,
                              const ClassMap& class_map, std::size_t samples, std::uint64_t seed) {
  TypeProfile p;
  p.predicate = index.predicate(predicate_iri);
  p.seed = seed;
  auto subjects = sample_entities(index, predicate_iri, Role::Subject, samples, seed);
  auto objects = sample_entities(index, predicate_iri, Role::Object, samples, seed);
  p.domain = majority_class(subjects, class_map);
  p.range = majority_class(objects, class_map);
  p.domain_sample_size = subjects.size();
  p.range_sample_size = objects.size();
  return p;
}

nlohmann::json to_json(const TypeProfile& p) {
  return nlohmann::json{{"predicate", kb::to_json(p.predicate)},
                        {"domain", std::string(class_name(p.domain))},
                        {"range", std::string(class_name(p.range))},
                        {"samples", {{"domain", p.domain_sample_size}, {"range", p.range_sample_size}}},
                        {"seed", p.seed}};
}

TypeProfile profile_from_json(const nlohmann::json& j) {
  TypeProfile p;
  p.predicate = kb::predicate_from_json(j.at("predicate"));
  auto domain = parse_class(j.at("domain").get<std::string>());
  auto range = parse_class(j.at("range").get<std::string>());
  if (!domain || !range) throw Error("bad class in type profile");
  p.domain = *domain;
  p.range = *range;
  p.domain_sample_size = j.at("samples").at("domain").get<std::size_t>();
  p.range_sample_size = j.at("samples").at("range").get<std::size_t>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

}  // namespace counqer::typing
