#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "counqer/classify/model.hpp"
#include "counqer/eval/metrics.hpp"

namespace counqer::classify {

struct LooResult {
  eval::Prf1 scores;
  std::vector<bool> predictions;  // held-out prediction per example, input order
  std::size_t trained_folds = 0;
  std::size_t skipped_folds = 0;  // single-class folds, predicted negative
};

/// Leave-one-out cross validation. Needs at least three examples.
LooResult loo_cv(std::span<const LabeledExample> examples, const ModelSpec& spec, std::uint64_t seed);

/// Expected scores of a predictor that guesses positive with probability
/// equal to the positive rate: P = R = F1 = 100 * n_pos / (n_pos + n_neg).
eval::Prf1 random_baseline(std::size_t n_pos, std::size_t n_neg);

/// True when a label has a token equal to "id" or "code".
bool identifier_filter(std::string_view label);

}  // namespace counqer::classify
