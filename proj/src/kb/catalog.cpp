#include "counqer/kb/catalog.hpp"

#include <algorithm>
#include <utility>

#include "counqer/kb/parser.hpp"

namespace counqer::kb {

std::vector<Triple> deduplicate(std::vector<Triple> triples) {
  std::vector<std::pair<std::string, std::size_t>> keys;
  keys.reserve(triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    keys.emplace_back(triples[i].predicate.kb.name() + '\x1f' + to_ntriples(triples[i]), i);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<Triple> out;
  out.reserve(triples.size());
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (k > 0 && keys[k].first == keys[k - 1].first) continue;
    out.push_back(std::move(triples[keys[k].second]));
  }
  return out;
}

std::vector<Triple> materialize_inverses(std::vector<Triple> triples) {
  const std::size_t n = triples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Triple& t = triples[i];
    if (t.predicate.inverted) continue;
    if (const auto* e = std::get_if<Entity>(&t.object)) {
      Triple inv{e->id, t.predicate.inverse(), Entity{t.subject}};
      triples.push_back(std::move(inv));
    }
  }
  return deduplicate(std::move(triples));
}

std::map<std::string, std::size_t> count_by_predicate(const std::vector<Triple>& triples) {
  std::map<std::string, std::size_t> counts;
  for (const auto& t : triples) ++counts[t.predicate.iri];
  return counts;
}

std::set<std::string> filter_frequent(const std::map<std::string, std::size_t>& counts,
                                      std::size_t min_count) {
  std::set<std::string> out;
  for (const auto& [iri, count] : counts) {
    if (count >= min_count) out.insert(iri);
  }
  return out;
}

}  // namespace counqer::kb
