#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "counqer/kb/parser.hpp"
#include "counqer/kb/triple.hpp"

namespace counqer::kb {

/// Read-only index over a triple collection: by predicate and by
/// (subject, predicate). Built once, then shared between readers.
class TripleIndex {
 public:
  TripleIndex() = default;
  explicit TripleIndex(std::vector<Triple> triples);

  /// Loads a canonical triple file written by the ingest stage.
  static TripleIndex load(const std::string& path, const ParseOptions& options);

  std::span<const Triple> triples() const { return triples_; }

  /// Predicates in IRI order.
  std::vector<PredicateId> predicates() const;
  bool has_predicate(std::string_view iri) const;
  const PredicateId& predicate(std::string_view iri) const;

  /// Triples of one predicate, in stored order.
  std::vector<const Triple*> triples_of(std::string_view predicate_iri) const;

  /// Objects of (subject, predicate); empty when absent.
  std::vector<ObjectValue> objects(std::string_view subject, std::string_view predicate_iri) const;

  /// Distinct subjects over the whole KB (the N of co-occurrence statistics).
  std::size_t subject_count() const { return subject_count_; }

 private:
  std::vector<Triple> triples_;
  std::map<std::string, PredicateId, std::less<>> predicates_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_predicate_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_subject_predicate_;
  std::size_t subject_count_ = 0;
};

}  // namespace counqer::kb
