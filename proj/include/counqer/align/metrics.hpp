#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "counqer/align/cooccurrence.hpp"

namespace counqer::align {

enum class Metric {
  Absolute,
  Jaccard,
  ConditionalE,
  ConditionalC,
  Pmi,
  PerfectMatchRatio,
  Correlation,
  PtileVm,
  CosineSim,
};
inline constexpr std::size_t kMetricCount = 9;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics{
    Metric::Absolute, Metric::Jaccard,     Metric::ConditionalE, Metric::ConditionalC, Metric::Pmi,
    Metric::PerfectMatchRatio, Metric::Correlation, Metric::PtileVm, Metric::CosineSim};

std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view name);

/// Subject-set sizes for one pair. n is the number of distinct subjects in the KB.
struct PairCounts {
  std::size_t subjects_e = 0;
  std::size_t subjects_c = 0;
  std::size_t shared = 0;
  std::size_t n = 0;
};

double metric_absolute(const PairCounts& k);
double metric_jaccard(const PairCounts& k);
double metric_conditional_e(const PairCounts& k);
double metric_conditional_c(const PairCounts& k);

/// log2(shared * n / (|S_e| |S_c|)); -inf when nothing is shared.
double metric_pmi(const PairCounts& k);

/// A score that may be undefined; undefined scores are 0.
struct Scored {
  double value = 0.0;
  bool defined = true;
};

Scored metric_perfect_match_ratio(std::span<const CooccurrenceRecord> records);

/// Pearson r over (n_e, v_c). Fewer than two records or a constant
/// coordinate gives 0, undefined.
Scored metric_correlation(std::span<const CooccurrenceRecord> records);

/// min of the two ratios of nearest-rank 90th percentiles of n_e and v_c.
/// A zero percentile gives 0, undefined.
Scored metric_ptile_vm(std::span<const CooccurrenceRecord> records);

}  // namespace counqer::align
