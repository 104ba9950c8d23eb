#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "counqer/kb/triple.hpp"

namespace counqer::kb {

/// Removes duplicate triples, returning them in canonical (N-Triples line)
/// order. The result does not depend on input order.
std::vector<Triple> deduplicate(std::vector<Triple> triples);

/// input ∪ {(o, p^-1, s) : (s, p, Entity(o)) in input, p not inverted},
/// deduplicated. Inverse predicates are never inverted again.
std::vector<Triple> materialize_inverses(std::vector<Triple> triples);

/// Triple count per predicate IRI.
std::map<std::string, std::size_t> count_by_predicate(const std::vector<Triple>& triples);

/// Predicates with at least `min_count` triples.
std::set<std::string> filter_frequent(const std::map<std::string, std::size_t>& counts,
                                      std::size_t min_count = 50);

}  // namespace counqer::kb
