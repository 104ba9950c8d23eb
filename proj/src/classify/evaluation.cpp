#include "counqer/classify/evaluation.hpp"

#include <algorithm>

#include "counqer/error.hpp"
#include "counqer/text/tokenize.hpp"

namespace counqer::classify {

LooResult loo_cv(std::span<const LabeledExample> examples, const ModelSpec& spec, std::uint64_t seed) {
  if (examples.size() < 3) throw Error("loo_cv needs at least three examples");
  LooResult result;
  result.predictions.assign(examples.size(), false);
  std::vector<bool> labels;
  labels.reserve(examples.size());
  for (const auto& e : examples) labels.push_back(e.label);

  std::vector<LabeledExample> fold;
  fold.reserve(examples.size() - 1);
  for (std::size_t held = 0; held < examples.size(); ++held) {
    fold.clear();
    std::size_t positives = 0;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      if (i == held) continue;
      fold.push_back(examples[i]);
      positives += examples[i].label ? 1 : 0;
    }
    const bool single_class = positives == 0 || positives == fold.size();
    if (single_class && spec.kind != ModelKind::Neural) {
      ++result.skipped_folds;
      continue;
    }
    const auto model = train(fold, spec, seed);
    result.predictions[held] = predict(model, examples[held].features).label;
    ++result.trained_folds;
  }
  result.scores = eval::prf1(result.predictions, labels);
  return result;
}

eval::Prf1 random_baseline(std::size_t n_pos, std::size_t n_neg) {
  if (n_pos + n_neg == 0) throw Error("random_baseline needs at least one example");
  const double rate = 100.0 * static_cast<double>(n_pos) / static_cast<double>(n_pos + n_neg);
  return {rate, rate, rate};
}

bool identifier_filter(std::string_view label) {
  const auto tokens = text::tokenize_label(label);
  return std::any_of(tokens.begin(), tokens.end(), [](const std::string& t) { return t == "id" || t == "code"; });
}

}  // namespace counqer::classify
