#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "counqer/kb/triple.hpp"

namespace counqer::stats {

/// mean / min / max / 10th / 90th percentile of a sample. `defined` is false
/// for an empty sample, in which case all numbers are zero.
struct FiveNumber {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
  bool defined = false;

  /// Summary of a sample in any order. Empty input yields an undefined summary.
  static FiveNumber of(std::vector<double> values);

  friend bool operator==(const FiveNumber&, const FiveNumber&) = default;
};

/// Fraction of a predicate's triples per object datatype.
struct DatatypeDistribution {
  double frac_entity = 0.0;
  double frac_integer = 0.0;
  double frac_decimal = 0.0;
  double frac_date = 0.0;
  double frac_csvlist = 0.0;
  double frac_text = 0.0;

  double sum() const {
    return frac_entity + frac_integer + frac_decimal + frac_date + frac_csvlist + frac_text;
  }
  friend bool operator==(const DatatypeDistribution&, const DatatypeDistribution&) = default;
};

struct PredicateStats {
  kb::PredicateId predicate;
  std::size_t triple_count = 0;
  std::size_t subject_count = 0;
  DatatypeDistribution datatypes;
  FiveNumber functionality;    // objects per subject
  FiveNumber int_values;       // integer object values
  FiveNumber int_per_subject;  // integer-valued triples per subject holding any

  friend bool operator==(const PredicateStats&, const PredicateStats&) = default;
};

/// Mergeable accumulator for one predicate. Partitions must split the
/// predicate's triples by subject; merging in any order gives the same result
/// as a single pass.
class StatsAccumulator {
 public:
  explicit StatsAccumulator(kb::PredicateId predicate) : predicate_(std::move(predicate)) {}

  void add(const kb::Triple& t);
  void merge(const StatsAccumulator& other);
  PredicateStats finish() const;

  const kb::PredicateId& predicate() const { return predicate_; }
  std::size_t triple_count() const { return triple_count_; }

 private:
  struct PerSubject {
    std::size_t objects = 0;
    std::size_t integers = 0;
  };

  kb::PredicateId predicate_;
  std::size_t triple_count_ = 0;
  std::array<std::size_t, kb::kValueKinds> kind_counts_{};
  std::map<std::string, PerSubject> per_subject_;
  std::vector<std::int64_t> int_values_;
};

/// Statistics of one predicate's (deduplicated) triples.
PredicateStats compute_stats(std::span<const kb::Triple> triples);

/// Combines two accumulators over subject-disjoint partitions.
StatsAccumulator merge_stats(const StatsAccumulator& a, const StatsAccumulator& b);

nlohmann::json to_json(const FiveNumber& f);
FiveNumber five_number_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PredicateStats& s);
PredicateStats stats_from_json(const nlohmann::json& j);

/// JSON Lines, one predicate per line.
void write_stats(std::ostream& out, std::span<const PredicateStats> stats);
std::vector<PredicateStats> read_stats(std::istream& in);

}  // namespace counqer::stats
