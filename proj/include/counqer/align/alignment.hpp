#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "counqer/align/cooccurrence.hpp"
#include "counqer/align/metrics.hpp"
#include "counqer/kinds.hpp"
#include "counqer/text/embedding.hpp"

namespace counqer::align {

enum class CombineMode { Normalized, Raw };
std::string_view combine_mode_name(CombineMode m);
CombineMode parse_combine_mode(std::string_view name);

/// One representative metric per heuristic family, per direction.
struct CombineConfig {
  CombineMode mode = CombineMode::Normalized;
  std::vector<Metric> counting_to_enumerating{Metric::ConditionalE, Metric::Correlation, Metric::CosineSim};
  std::vector<Metric> enumerating_to_counting{Metric::Pmi, Metric::PerfectMatchRatio, Metric::CosineSim};

  const std::vector<Metric>& representatives(Direction d) const {
    return d == Direction::CountingToEnumerating ? counting_to_enumerating : enumerating_to_counting;
  }
};

struct AlignmentPair {
  kb::PredicateId e;
  kb::PredicateId c;
  std::size_t support = 0;
  std::array<double, kMetricCount> scores{};
  std::set<std::string> undefined;  // metric names scored 0 for lack of data
  std::size_t n_subjects_e = 0;
  std::size_t n_subjects_c = 0;
  std::size_t n_subjects_total = 0;
  std::optional<double> combined_c2e;
  std::optional<double> combined_e2c;

  double score(Metric m) const { return scores[static_cast<std::size_t>(m)]; }
  double& score(Metric m) { return scores[static_cast<std::size_t>(m)]; }
  const kb::KbTag& kb() const { return e.kb; }
  std::optional<double> combined(Direction d) const {
    return d == Direction::CountingToEnumerating ? combined_c2e : combined_e2c;
  }
  /// The predicate a ranking in direction d returns.
  const kb::PredicateId& target(Direction d) const { return d == Direction::CountingToEnumerating ? e : c; }
  const kb::PredicateId& source(Direction d) const { return d == Direction::CountingToEnumerating ? c : e; }
};

/// All nine metrics for one pair. cosine_sim is 0 without an embedding table.
AlignmentPair score_pair(const kb::PredicateId& e, const kb::PredicateId& c, const PredicateSubjects& se,
                         const PredicateSubjects& sc, std::size_t n_subjects,
                         const text::EmbeddingTable* embeddings);

struct AlignmentOptions {
  ValueAggregation aggregation = ValueAggregation::Max;
  std::size_t min_support = 50;
  CombineConfig combine;
  const text::EmbeddingTable* embeddings = nullptr;
};

class AlignmentTable {
 public:
  AlignmentTable() = default;
  AlignmentTable(std::vector<kb::PredicateId> enumerating, std::vector<kb::PredicateId> counting,
                 std::vector<AlignmentPair> pairs);

  /// Scores every same-KB pair sharing a subject and fills in the combined
  /// scores for both directions.
  static AlignmentTable build(const std::vector<std::string>& enumerating, const std::vector<std::string>& counting,
                              const kb::TripleIndex& index, const AlignmentOptions& options);

  std::span<const AlignmentPair> pairs() const { return pairs_; }
  const std::vector<kb::PredicateId>& enumerating() const { return enumerating_; }
  const std::vector<kb::PredicateId>& counting() const { return counting_; }

  const AlignmentPair* find(std::string_view e_iri, std::string_view c_iri) const;
  /// True if iri is a source predicate for direction d.
  bool is_source(std::string_view iri, Direction d) const;
  /// Pairs whose source in direction d is iri, in table order.
  std::vector<const AlignmentPair*> candidates(std::string_view iri, Direction d) const;

  /// Recomputes the stored combined scores.
  void assign_combined(std::size_t min_support, const CombineConfig& config);

 private:
  std::vector<kb::PredicateId> enumerating_;
  std::vector<kb::PredicateId> counting_;
  std::vector<AlignmentPair> pairs_;  // sorted by (e, c)
};

/// Mean of the direction's representatives. In normalized mode each
/// representative is min-max scaled over `pool`; a constant metric scales
/// to 1. Pairs outside the pool are scaled against it all the same.
double combined_score(const AlignmentPair& pair, std::span<const AlignmentPair* const> pool, Direction d,
                      const CombineConfig& config);

/// Top-k targets for a source predicate: support >= min_support, sorted by
/// combined score descending, then support descending, then target IRI.
/// Throws on an unknown source.
std::vector<AlignmentPair> rank_alignments(const AlignmentTable& table, std::string_view source, Direction d,
                                           std::size_t k = 3, std::size_t min_support = 50,
                                           const CombineConfig& config = {});

/// Same ordering with a single metric in place of the combined score.
std::vector<AlignmentPair> rank_by_metric(const AlignmentTable& table, std::string_view source, Direction d,
                                          Metric metric, std::size_t k = 3, std::size_t min_support = 50);

nlohmann::json to_json(const AlignmentPair& p);
AlignmentPair alignment_pair_from_json(const nlohmann::json& j);

void write_table(std::ostream& out, const AlignmentTable& table);
AlignmentTable read_table(std::istream& in);

/// CSV with header subject,n_e,v_c,anomaly; rows in subject order. anomaly
/// is 1 when v_c < n_e.
std::string export_value_distribution(std::span<const CooccurrenceRecord> records);
std::vector<CooccurrenceRecord> parse_value_distribution(std::istream& in);

}  // namespace counqer::align
