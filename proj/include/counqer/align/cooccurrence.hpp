#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "counqer/kb/triple_index.hpp"

namespace counqer::align {

/// How several integer values of a counting predicate on one subject reduce
/// to a single v_c. Latest takes the last value in stored triple order;
/// Mean rounds to the nearest whole number.
enum class ValueAggregation { Max, Mean, Latest };
std::string_view aggregation_name(ValueAggregation a);
ValueAggregation parse_aggregation(std::string_view name);

struct CooccurrenceRecord {
  std::string subject;
  std::int64_t n_e = 0;
  std::int64_t v_c = 0;
  friend bool operator==(const CooccurrenceRecord&, const CooccurrenceRecord&) = default;
};

/// Subject-level view of one predicate.
struct PredicateSubjects {
  std::vector<std::string> subjects;             // sorted, distinct
  std::map<std::string, std::int64_t> sizes;     // enumerated set size per subject (entity objects + list items)
  std::map<std::string, std::int64_t> values;    // aggregated integer value per subject
};

PredicateSubjects collect_subjects(const kb::TripleIndex& index, std::string_view iri, ValueAggregation agg);

/// Records over the subjects holding both predicates, sorted by subject.
/// A subject yields a record when it has n_e >= 1 and an integer value of c.
std::vector<CooccurrenceRecord> join_records(const PredicateSubjects& e, const PredicateSubjects& c);

/// Number of subjects holding both predicates.
std::size_t shared_subjects(const PredicateSubjects& e, const PredicateSubjects& c);

using PairKey = std::pair<std::string, std::string>;  // (e iri, c iri)

/// Record lists for every same-KB (e, c) pair sharing at least one subject.
std::map<PairKey, std::vector<CooccurrenceRecord>> build_cooccurrence(const std::vector<std::string>& enumerating,
                                                                      const std::vector<std::string>& counting,
                                                                      const kb::TripleIndex& index,
                                                                      ValueAggregation agg = ValueAggregation::Max);

}  // namespace counqer::align
