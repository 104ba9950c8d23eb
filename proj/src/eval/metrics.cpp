#include "counqer/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "counqer/error.hpp"

namespace counqer::eval {

Prf1 prf1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  Prf1 s;
  if (tp + fp > 0) s.precision = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) s.recall = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (s.precision + s.recall > 0.0) s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

Prf1 prf1(const std::vector<bool>& predictions, const std::vector<bool>& labels) {
  if (predictions.size() != labels.size()) throw Error("prf1: predictions and labels differ in length");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] && labels[i]) ++tp;
    else if (predictions[i]) ++fp;
    else if (labels[i]) ++fn;
  }
  return prf1_from_counts(tp, fp, fn);
}

namespace {

double dcg(std::span<const double> grades, std::size_t k) {
  double sum = 0.0;
  const std::size_t n = std::min(k, grades.size());
  for (std::size_t i = 0; i < n; ++i) sum += grades[i] / std::log2(static_cast<double>(i) + 2.0);
  return sum;
}

}  // namespace

double ndcg_at_k(std::span<const double> ranked_grades, std::size_t k) {
  if (k == 0) throw Error("ndcg_at_k: k must be at least 1");
  std::vector<double> ideal(ranked_grades.begin(), ranked_grades.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg(ideal, k);
  if (idcg <= 0.0) return 0.0;
  return dcg(ranked_grades, k) / idcg;
}

nlohmann::json to_json(const Prf1& s) {
  return nlohmann::json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

}  // namespace counqer::eval
