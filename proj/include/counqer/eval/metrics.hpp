#pragma once

#include <span>
#include <vector>

#include <json.hpp>

namespace counqer::eval {

/// Precision, recall and F1 as percentages.
struct Prf1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Standard definitions; each score is 0 when its denominator is 0.
/// Throws on length mismatch.
Prf1 prf1(const std::vector<bool>& predictions, const std::vector<bool>& labels);

/// Prf1 from confusion counts.
Prf1 prf1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);

/// DCG over the first k grades divided by the DCG of all grades sorted
/// descending (truncated at k). All-zero grades give 0.
double ndcg_at_k(std::span<const double> ranked_grades, std::size_t k);

nlohmann::json to_json(const Prf1& s);

}  // namespace counqer::eval
