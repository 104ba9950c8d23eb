#pragma once

#include <span>

namespace counqer::stats {

/// Nearest-rank percentile of a sorted, non-empty sample: the value at
/// 1-based rank ceil(p/100 * n), with p = 0 mapped to rank 1.
/// Throws counqer::Error("empty distribution") on an empty sample.
double percentile(std::span<const double> sorted_values, double p);

}  // namespace counqer::stats
