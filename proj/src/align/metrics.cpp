#include "counqer/align/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "counqer/error.hpp"
#include "counqer/stats/percentile.hpp"

namespace counqer::align {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::Absolute: return "absolute";
    case Metric::Jaccard: return "jaccard";
    case Metric::ConditionalE: return "conditional_e";
    case Metric::ConditionalC: return "conditional_c";
    case Metric::Pmi: return "pmi";
    case Metric::PerfectMatchRatio: return "perfect_match_ratio";
    case Metric::Correlation: return "correlation";
    case Metric::PtileVm: return "ptile_vm";
    case Metric::CosineSim: return "cosine_sim";
  }
  return "absolute";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  throw ConfigError("unknown metric: " + std::string(name));
}

double metric_absolute(const PairCounts& k) { return static_cast<double>(k.shared); }

double metric_jaccard(const PairCounts& k) {
  const std::size_t uni = k.subjects_e + k.subjects_c - k.shared;
  return uni == 0 ? 0.0 : static_cast<double>(k.shared) / static_cast<double>(uni);
}

double metric_conditional_e(const PairCounts& k) {
  return k.subjects_e == 0 ? 0.0 : static_cast<double>(k.shared) / static_cast<double>(k.subjects_e);
}

double metric_conditional_c(const PairCounts& k) {
  return k.subjects_c == 0 ? 0.0 : static_cast<double>(k.shared) / static_cast<double>(k.subjects_c);
}

double metric_pmi(const PairCounts& k) {
  if (k.shared == 0 || k.subjects_e == 0 || k.subjects_c == 0) return -std::numeric_limits<double>::infinity();
  const double joint = static_cast<double>(k.shared) * static_cast<double>(k.n);
  const double indep = static_cast<double>(k.subjects_e) * static_cast<double>(k.subjects_c);
  return std::log2(joint / indep);
}

Scored metric_perfect_match_ratio(std::span<const CooccurrenceRecord> records) {
  if (records.empty()) return {0.0, false};
  std::size_t hits = 0;
  for (const auto& r : records) hits += r.n_e == r.v_c ? 1 : 0;
  return {static_cast<double>(hits) / static_cast<double>(records.size()), true};
}

Scored metric_correlation(std::span<const CooccurrenceRecord> records) {
  if (records.size() < 2) return {0.0, false};
  const auto n = static_cast<double>(records.size());
  double mx = 0.0, my = 0.0;
  for (const auto& r : records) {
    mx += static_cast<double>(r.n_e);
    my += static_cast<double>(r.v_c);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& r : records) {
    const double dx = static_cast<double>(r.n_e) - mx;
    const double dy = static_cast<double>(r.v_c) - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return {0.0, false};
  return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), true};
}

Scored metric_ptile_vm(std::span<const CooccurrenceRecord> records) {
  if (records.empty()) return {0.0, false};
  std::vector<double> ne, vc;
  ne.reserve(records.size());
  vc.reserve(records.size());
  for (const auto& r : records) {
    ne.push_back(static_cast<double>(r.n_e));
    vc.push_back(static_cast<double>(r.v_c));
  }
  std::sort(ne.begin(), ne.end());
  std::sort(vc.begin(), vc.end());
  const double pe = stats::percentile(ne, 90.0);
  const double pc = stats::percentile(vc, 90.0);
  if (pe <= 0.0 || pc <= 0.0) return {0.0, false};
  return {std::min(pe / pc, pc / pe), true};
}

}  // namespace counqer::align
