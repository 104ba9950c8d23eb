#include "counqer/align/cooccurrence.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "counqer/error.hpp"

namespace counqer::align {

std::string_view aggregation_name(ValueAggregation a) {
  switch (a) {
    case ValueAggregation::Max: return "max";
    case ValueAggregation::Mean: return "mean";
    case ValueAggregation::Latest: return "latest";
  }
  return "max";
}

ValueAggregation parse_aggregation(std::string_view name) {
  if (name == "max") return ValueAggregation::Max;
  if (name == "mean") return ValueAggregation::Mean;
  if (name == "latest") return ValueAggregation::Latest;
  throw ConfigError("unknown value aggregation: " + std::string(name));
}

PredicateSubjects collect_subjects(const kb::TripleIndex& index, std::string_view iri, ValueAggregation agg) {
  PredicateSubjects out;
  std::map<std::string, std::vector<std::int64_t>> raw_values;
  for (const kb::Triple* t : index.triples_of(iri)) {
    out.subjects.push_back(t->subject);
    if (std::holds_alternative<kb::Entity>(t->object)) {
      out.sizes[t->subject] += 1;
    } else if (const auto* list = std::get_if<kb::CsvList>(&t->object)) {
      out.sizes[t->subject] += static_cast<std::int64_t>(list->items.size());
    } else if (const auto* n = std::get_if<kb::Integer>(&t->object)) {
      raw_values[t->subject].push_back(n->value);
    }
  }
  std::sort(out.subjects.begin(), out.subjects.end());
  out.subjects.erase(std::unique(out.subjects.begin(), out.subjects.end()), out.subjects.end());

  for (auto& [subject, vs] : raw_values) {
    std::int64_t v = 0;
    switch (agg) {
      case ValueAggregation::Max: v = *std::max_element(vs.begin(), vs.end()); break;
      case ValueAggregation::Latest: v = vs.back(); break;
      case ValueAggregation::Mean: {
        long double sum = 0;
        for (auto x : vs) sum += static_cast<long double>(x);
        v = static_cast<std::int64_t>(std::llround(sum / static_cast<long double>(vs.size())));
        break;
      }
    }
    out.values.emplace(subject, v);
  }
  return out;
}

std::vector<CooccurrenceRecord> join_records(const PredicateSubjects& e, const PredicateSubjects& c) {
  std::vector<CooccurrenceRecord> out;
  auto ei = e.sizes.begin();
  auto ci = c.values.begin();
  while (ei != e.sizes.end() && ci != c.values.end()) {
    if (ei->first < ci->first) {
      ++ei;
    } else if (ci->first < ei->first) {
      ++ci;
    } else {
      if (ei->second >= 1) out.push_back({ei->first, ei->second, ci->second});
      ++ei;
      ++ci;
    }
  }
  return out;
}

std::size_t shared_subjects(const PredicateSubjects& e, const PredicateSubjects& c) {
  std::size_t n = 0;
  auto a = e.subjects.begin();
  auto b = c.subjects.begin();
  while (a != e.subjects.end() && b != c.subjects.end()) {
    if (*a < *b) ++a;
    else if (*b < *a) ++b;
    else {
      ++n;
      ++a;
      ++b;
    }
  }
  return n;
}

std::map<PairKey, std::vector<CooccurrenceRecord>> build_cooccurrence(const std::vector<std::string>& enumerating,
                                                                      const std::vector<std::string>& counting,
                                                                      const kb::TripleIndex& index,
                                                                      ValueAggregation agg) {
  std::map<std::string, PredicateSubjects> cache;
  auto view = [&](const std::string& iri) -> const PredicateSubjects& {
    auto it = cache.find(iri);
    if (it == cache.end()) it = cache.emplace(iri, collect_subjects(index, iri, agg)).first;
    return it->second;
  };

  std::map<PairKey, std::vector<CooccurrenceRecord>> out;
  for (const auto& e : enumerating) {
    if (!index.has_predicate(e)) continue;
    for (const auto& c : counting) {
      if (!index.has_predicate(c) || e == c) continue;
      if (!(index.predicate(e).kb == index.predicate(c).kb)) continue;
      const auto& ve = view(e);
      const auto& vc = view(c);
      if (shared_subjects(ve, vc) == 0) continue;
      out.emplace(PairKey{e, c}, join_records(ve, vc));
    }
  }
  return out;
}

}  // namespace counqer::align
