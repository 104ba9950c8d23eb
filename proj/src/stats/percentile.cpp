#include "counqer/stats/percentile.hpp"

#include <algorithm>
#include <cmath>

#include "counqer/error.hpp"

namespace counqer::stats {

double percentile(std::span<const double> sorted_values, double p) {
  if (sorted_values.empty()) throw Error("empty distribution");
  if (p < 0.0 || p > 100.0) throw Error("percentile out of range");
  const auto n = static_cast<double>(sorted_values.size());
  // p * n first keeps integer percentiles of integer-sized samples exact.
  auto rank = static_cast<std::size_t>(std::ceil(p * n / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, sorted_values.size());
  return sorted_values[rank - 1];
}

}  // namespace counqer::stats
