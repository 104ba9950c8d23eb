#include "counqer/kb/triple_index.hpp"

#include <fstream>
#include <unordered_set>

#include "counqer/error.hpp"

namespace counqer::kb {

namespace {

std::string sp_key(std::string_view subject, std::string_view predicate) {
  std::string key(subject);
  key += '\x1f';
  key += predicate;
  return key;
}

}  // namespace

TripleIndex::TripleIndex(std::vector<Triple> triples) : triples_(std::move(triples)) {
  std::unordered_set<std::string_view> subjects;
  for (std::size_t i = 0; i < triples_.size(); ++i) {
    const Triple& t = triples_[i];
    predicates_.try_emplace(t.predicate.iri, t.predicate);
    by_predicate_[t.predicate.iri].push_back(i);
    by_subject_predicate_[sp_key(t.subject, t.predicate.iri)].push_back(i);
    subjects.insert(t.subject);
  }
  subject_count_ = subjects.size();
}

TripleIndex TripleIndex::load(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact("ingest", path);
  std::vector<Triple> triples;
  ParseOptions o = options;
  o.file_name = path;
  parse_triples(
      in, o, [&](Triple&& t) { triples.push_back(std::move(t)); },
      [&](ParseError&& e) {
        throw Error("corrupt triple file " + path + " line " + std::to_string(e.line) + ": " + e.reason);
      });
  return TripleIndex(std::move(triples));
}

std::vector<PredicateId> TripleIndex::predicates() const {
  std::vector<PredicateId> out;
  out.reserve(predicates_.size());
  for (const auto& [iri, p] : predicates_) out.push_back(p);
  return out;
}

bool TripleIndex::has_predicate(std::string_view iri) const { return predicates_.find(iri) != predicates_.end(); }

const PredicateId& TripleIndex::predicate(std::string_view iri) const {
  auto it = predicates_.find(iri);
  if (it == predicates_.end()) throw Error("unknown predicate: " + std::string(iri));
  return it->second;
}

std::vector<const Triple*> TripleIndex::triples_of(std::string_view predicate_iri) const {
  std::vector<const Triple*> out;
  auto it = by_predicate_.find(predicate_iri);
  if (it == by_predicate_.end()) return out;
  out.reserve(it->second.size());
  for (auto i : it->second) out.push_back(&triples_[i]);
  return out;
}

std::vector<ObjectValue> TripleIndex::objects(std::string_view subject, std::string_view predicate_iri) const {
  std::vector<ObjectValue> out;
  auto it = by_subject_predicate_.find(sp_key(subject, predicate_iri));
  if (it == by_subject_predicate_.end()) return out;
  for (auto i : it->second) out.push_back(triples_[i].object);
  return out;
}

}  // namespace counqer::kb
