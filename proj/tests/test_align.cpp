#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "counqer/align/alignment.hpp"
#include "counqer/align/cooccurrence.hpp"
#include "counqer/align/metrics.hpp"
#include "counqer/error.hpp"
#include "counqer/kb/catalog.hpp"
#include "counqer/kb/parser.hpp"
#include "counqer/kb/triple_index.hpp"
#include "support/align_oracle.hpp"

using namespace counqer;
using namespace counqer::align;

namespace {

kb::Triple ent(const std::string& s, const std::string& p, const std::string& o) {
  return {s, kb::PredicateId::from_iri(p), kb::Entity{o}};
}
kb::Triple num(const std::string& s, const std::string& p, std::int64_t v) {
  return {s, kb::PredicateId::from_iri(p), kb::Integer{v}};
}

std::vector<CooccurrenceRecord> records(std::initializer_list<std::pair<std::int64_t, std::int64_t>> xs) {
  std::vector<CooccurrenceRecord> out;
  int i = 0;
  for (auto [n, v] : xs) out.push_back({"s" + std::to_string(i++), n, v});
  return out;
}

std::vector<kb::Triple> fixture_triples(int copies = 1) {
  std::ifstream in(std::string(COUNQER_FIXTURE_DIR) + "/kb.nt");
  std::vector<kb::Triple> all;
  kb::parse_triples(in, {}, [&](kb::Triple&& t) { all.push_back(std::move(t)); }, [](kb::ParseError&&) {});
  const auto once = all;
  for (int i = 1; i < copies; ++i) all.insert(all.end(), once.begin(), once.end());
  return kb::materialize_inverses(kb::deduplicate(std::move(all)));
}

// Predicates split by their dominant object kind.
struct Sides {
  std::vector<std::string> enumerating, counting;
};

Sides split(const kb::TripleIndex& index) {
  Sides out;
  for (const auto& p : index.predicates()) {
    std::size_t ents = 0, ints = 0, total = 0;
    for (const kb::Triple* t : index.triples_of(p.iri)) {
      ++total;
      ents += std::holds_alternative<kb::Entity>(t->object) ? 1 : 0;
      ints += std::holds_alternative<kb::Integer>(t->object) ? 1 : 0;
    }
    if (2 * ents > total) out.enumerating.push_back(p.iri);
    if (2 * ints > total) out.counting.push_back(p.iri);
  }
  return out;
}

const std::string kOnt = "http://kb.example.org/ontology/";

}  // namespace

TEST(Metrics, SetOverlapExample) {
  const PairCounts k{10, 5, 4, 100};
  EXPECT_EQ(metric_absolute(k), 4.0);
  EXPECT_NEAR(metric_jaccard(k), 4.0 / 11.0, 1e-15);
  EXPECT_NEAR(metric_conditional_e(k), 0.4, 1e-15);
  EXPECT_NEAR(metric_conditional_c(k), 0.8, 1e-15);
  EXPECT_NEAR(metric_pmi(k), 3.0, 1e-12);
  const PairCounts same{7, 7, 7, 50};
  EXPECT_EQ(metric_jaccard(same), 1.0);
  EXPECT_EQ(metric_conditional_e(same), 1.0);
  EXPECT_EQ(metric_conditional_c(same), 1.0);
  EXPECT_TRUE(std::isinf(metric_pmi({3, 4, 0, 10})));
}

TEST(Metrics, PmiUpperBoundAttainedOnSubset) {
  // S_e inside S_c
  const PairCounts k{6, 20, 6, 200};
  EXPECT_NEAR(metric_pmi(k), -std::log2(20.0 / 200.0), 1e-12);
}

TEST(Metrics, PerfectMatchRatio) {
  EXPECT_EQ(metric_perfect_match_ratio(records({{2, 2}, {3, 5}, {1, 1}, {4, 9}})).value, 0.5);
  EXPECT_EQ(metric_perfect_match_ratio(records({{2, 2}, {3, 3}})).value, 1.0);
  EXPECT_FALSE(metric_perfect_match_ratio({}).defined);
}

TEST(Metrics, CorrelationConventions) {
  EXPECT_NEAR(metric_correlation(records({{1, 1}, {2, 2}, {5, 5}})).value, 1.0, 1e-12);
  auto constant = metric_correlation(records({{1, 4}, {2, 4}, {5, 4}}));
  EXPECT_EQ(constant.value, 0.0);
  EXPECT_FALSE(constant.defined);
  EXPECT_FALSE(metric_correlation(records({{1, 1}})).defined);
  EXPECT_NEAR(metric_correlation(records({{1, 3}, {2, 2}, {3, 1}})).value, -1.0, 1e-12);
}

TEST(Metrics, PercentileValueMatch) {
  // ten records: p90 of n_e is 3, of v_c is 9
  std::vector<CooccurrenceRecord> r;
  for (int i = 0; i < 10; ++i) r.push_back({"s" + std::to_string(i), i < 9 ? 3 : 1, i < 9 ? 9 : 2});
  EXPECT_NEAR(metric_ptile_vm(r).value, 1.0 / 3.0, 1e-15);
  for (auto& x : r) std::swap(x.n_e, x.v_c);
  EXPECT_NEAR(metric_ptile_vm(r).value, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(metric_ptile_vm(records({{2, 2}, {4, 4}})).value, 1.0);
  auto zero = metric_ptile_vm(records({{2, 0}, {4, 0}}));
  EXPECT_EQ(zero.value, 0.0);
  EXPECT_FALSE(zero.defined);
}

TEST(Metrics, NamesRoundTrip) {
  for (Metric m : kAllMetrics) EXPECT_EQ(parse_metric(metric_name(m)), m);
  EXPECT_THROW(parse_metric("combined_plus"), ConfigError);
}

TEST(Cooccurrence, MaxAggregationAndListItems) {
  kb::TripleIndex index({num("a", "c", 5), num("a", "c", 7), ent("a", "e", "x"),
                         {"a", kb::PredicateId::from_iri("e"), kb::CsvList{{"p", "q", "r"}}}});
  auto e = collect_subjects(index, "e", ValueAggregation::Max);
  EXPECT_EQ(e.sizes.at("a"), 4);
  EXPECT_EQ(collect_subjects(index, "c", ValueAggregation::Max).values.at("a"), 7);
  EXPECT_EQ(collect_subjects(index, "c", ValueAggregation::Latest).values.at("a"), 7);
  EXPECT_EQ(collect_subjects(index, "c", ValueAggregation::Mean).values.at("a"), 6);
  kb::TripleIndex rev({num("a", "c", 7), num("a", "c", 5)});
  EXPECT_EQ(collect_subjects(rev, "c", ValueAggregation::Latest).values.at("a"), 5);
}

TEST(Cooccurrence, DisjointPairAbsent) {
  kb::TripleIndex index({ent("a", "e", "x"), num("b", "c", 1), ent("b", "f", "y")});
  auto pairs = build_cooccurrence({"e", "f"}, {"c"}, index);
  EXPECT_EQ(pairs.size(), 1u);
  EXPECT_TRUE(pairs.count({"f", "c"}));
}

TEST(Cooccurrence, FixtureMatchesNestedLoopJoin) {
  kb::TripleIndex index(fixture_triples());
  const auto sides = split(index);
  const auto pairs = build_cooccurrence(sides.enumerating, sides.counting, index);
  ASSERT_GT(pairs.size(), 10u);
  std::size_t checked = 0;
  for (const auto& e : sides.enumerating) {
    for (const auto& c : sides.counting) {
      std::vector<CooccurrenceRecord> expect;
      bool share = false;
      for (const kb::Triple* te : index.triples_of(e)) {
        for (const kb::Triple* tc : index.triples_of(c)) share = share || te->subject == tc->subject;
      }
      // quadratic: for each subject of e, scan c's triples for its values
      std::map<std::string, std::int64_t> n_e;
      for (const kb::Triple* te : index.triples_of(e)) {
        if (std::holds_alternative<kb::Entity>(te->object)) n_e[te->subject] += 1;
      }
      for (const auto& [s, n] : n_e) {
        std::optional<std::int64_t> v;
        for (const kb::Triple* tc : index.triples_of(c)) {
          if (tc->subject != s) continue;
          if (auto* i = std::get_if<kb::Integer>(&tc->object)) v = v ? std::max(*v, i->value) : i->value;
        }
        if (v) expect.push_back({s, n, *v});
      }
      auto it = pairs.find({e, c});
      EXPECT_EQ(it != pairs.end(), share) << e << " " << c;
      if (it != pairs.end()) {
        EXPECT_EQ(it->second, expect) << e << " " << c;
        ++checked;
      }
    }
  }
  EXPECT_EQ(checked, pairs.size());
}

TEST(Alignment, MicroKbsMatchBruteForce) {
  std::size_t pairs = 0;
  for (std::uint32_t seed = 0; seed < 200; ++seed) {
    const auto micro = oracle::micro_kb(seed);
    kb::TripleIndex index(micro.triples);
    std::istringstream vectors(micro.embedding_text());
    const auto embeddings = text::EmbeddingTable::load(vectors);
    AlignmentOptions opts;
    opts.min_support = 0;
    opts.embeddings = &embeddings;
    const auto table = AlignmentTable::build(micro.enumerating, micro.counting, index, opts);
    for (const auto& p : table.pairs()) {
      ++pairs;
      const auto want = oracle::pair_scores(micro.triples, p.e.iri, p.c.iri);
      EXPECT_EQ(p.score(Metric::Absolute), want.absolute);
      EXPECT_NEAR(p.score(Metric::Jaccard), want.jaccard, 1e-12);
      EXPECT_NEAR(p.score(Metric::ConditionalE), want.conditional_e, 1e-12);
      EXPECT_NEAR(p.score(Metric::ConditionalC), want.conditional_c, 1e-12);
      EXPECT_NEAR(p.score(Metric::Pmi), want.pmi, 1e-12);
      EXPECT_NEAR(p.score(Metric::PerfectMatchRatio), want.perfect_match_ratio, 1e-12);
      EXPECT_NEAR(p.score(Metric::Correlation), want.correlation, 1e-12);
      EXPECT_NEAR(p.score(Metric::PtileVm), want.ptile_vm, 1e-12);
      EXPECT_NEAR(p.score(Metric::CosineSim), oracle::label_cosine(micro, p.e.iri, p.c.iri), 1e-12);
    }
  }
  EXPECT_GT(pairs, 1000u);
}

TEST(Alignment, MetricRangesAndBounds) {
  kb::TripleIndex index(fixture_triples());
  const auto sides = split(index);
  AlignmentOptions opts;
  const auto table = AlignmentTable::build(sides.enumerating, sides.counting, index, opts);
  ASSERT_FALSE(table.pairs().empty());
  for (const auto& p : table.pairs()) {
    const double j = p.score(Metric::Jaccard);
    EXPECT_LE(j, p.score(Metric::ConditionalE) + 1e-15);
    EXPECT_LE(j, p.score(Metric::ConditionalC) + 1e-15);
    EXPECT_LE(p.score(Metric::ConditionalE), 1.0);
    EXPECT_LE(p.score(Metric::ConditionalC), 1.0);
    const double n = static_cast<double>(p.n_subjects_total);
    const double bound = std::min(-std::log2(p.n_subjects_e / n), -std::log2(p.n_subjects_c / n));
    EXPECT_LE(p.score(Metric::Pmi), bound + 1e-12);
    for (Metric m : {Metric::PerfectMatchRatio, Metric::PtileVm}) {
      EXPECT_GE(p.score(m), 0.0);
      EXPECT_LE(p.score(m), 1.0);
    }
    EXPECT_GE(p.score(Metric::Correlation), -1.0);
    EXPECT_LE(p.score(Metric::Correlation), 1.0);
    EXPECT_EQ(p.support, static_cast<std::size_t>(p.score(Metric::Absolute)));
    EXPECT_EQ(p.e.kb, p.c.kb);
  }
}

TEST(Combined, MeanOfNormalizedRepresentatives) {
  AlignmentPair lo, hi, mid;
  for (Metric m : kAllMetrics) hi.score(m) = 1.0;
  mid.score(Metric::ConditionalE) = 0.2;
  mid.score(Metric::Correlation) = 0.4;
  mid.score(Metric::CosineSim) = 0.9;
  const std::vector<const AlignmentPair*> pool{&lo, &hi, &mid};
  const CombineConfig cfg;
  EXPECT_NEAR(combined_score(mid, pool, Direction::CountingToEnumerating, cfg), 0.5, 1e-15);
  EXPECT_EQ(combined_score(hi, pool, Direction::CountingToEnumerating, cfg), 1.0);
  // unused metric
  mid.score(Metric::Jaccard) = 123.0;
  EXPECT_NEAR(combined_score(mid, pool, Direction::CountingToEnumerating, cfg), 0.5, 1e-15);
  // single candidate
  const std::vector<const AlignmentPair*> alone{&mid};
  EXPECT_EQ(combined_score(mid, alone, Direction::EnumeratingToCounting, cfg), 1.0);
  CombineConfig raw;
  raw.mode = CombineMode::Raw;
  EXPECT_NEAR(combined_score(mid, pool, Direction::CountingToEnumerating, raw), 0.5, 1e-15);
}

TEST(Ranking, FullSortOracle) {
  kb::TripleIndex index(fixture_triples());
  const auto sides = split(index);
  const auto table = AlignmentTable::build(sides.enumerating, sides.counting, index, {});
  std::size_t rich = 0;
  for (Direction d : {Direction::CountingToEnumerating, Direction::EnumeratingToCounting}) {
    const auto& sources = d == Direction::CountingToEnumerating ? sides.counting : sides.enumerating;
    for (const auto& source : sources) {
      std::vector<const AlignmentPair*> pool;
      for (const auto* p : table.candidates(source, d)) {
        if (p->support >= 50) pool.push_back(p);
      }
      rich += pool.size() >= 5 ? 1 : 0;
      std::vector<std::pair<double, const AlignmentPair*>> keyed;
      for (const auto* p : pool) keyed.emplace_back(combined_score(*p, pool, d, {}), p);
      std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        if (a.second->support != b.second->support) return a.second->support > b.second->support;
        return a.second->target(d).iri < b.second->target(d).iri;
      });
      const auto got = rank_alignments(table, source, d, 1000);
      ASSERT_EQ(got.size(), keyed.size()) << source;
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].target(d).iri, keyed[i].second->target(d).iri) << source << " " << i;
        EXPECT_EQ(*got[i].combined(d), keyed[i].first);
      }
      const auto top3 = rank_alignments(table, source, d, 3);
      const auto top1 = rank_alignments(table, source, d, 1);
      EXPECT_LE(top3.size(), 3u);
      if (!top3.empty()) EXPECT_EQ(top1.front().target(d).iri, top3.front().target(d).iri);
    }
  }
  EXPECT_GT(rich, 0u);
  EXPECT_THROW(rank_alignments(table, "http://nowhere/p", Direction::CountingToEnumerating), Error);
}

TEST(Ranking, FixtureTopAlignments) {
  kb::TripleIndex index(fixture_triples());
  const auto sides = split(index);
  const auto embeddings = text::EmbeddingTable::load_file(std::string(COUNQER_FIXTURE_DIR) + "/embeddings.txt");
  AlignmentOptions opts;
  opts.embeddings = &embeddings;
  const auto table = AlignmentTable::build(sides.enumerating, sides.counting, index, opts);
  EXPECT_GT(table.find(kOnt + "child", kOnt + "numberOfChildren")->score(Metric::CosineSim), 0.5);
  const auto top = rank_alignments(table, kOnt + "numberOfChildren", Direction::CountingToEnumerating, 3);
  ASSERT_FALSE(top.empty());
  EXPECT_EQ(top.front().e.iri, kOnt + "child");
  EXPECT_TRUE(rank_alignments(table, kOnt + "numberOfChildren", Direction::CountingToEnumerating, 3, 100000).empty());
}

TEST(Ranking, DuplicatedInputGivesSameRanking) {
  kb::TripleIndex once(fixture_triples(1));
  kb::TripleIndex twice(fixture_triples(2));
  const auto sides = split(once);
  const auto a = AlignmentTable::build(sides.enumerating, sides.counting, once, {});
  const auto b = AlignmentTable::build(sides.enumerating, sides.counting, twice, {});
  for (const auto& c : sides.counting) {
    const auto ra = rank_alignments(a, c, Direction::CountingToEnumerating);
    const auto rb = rank_alignments(b, c, Direction::CountingToEnumerating);
    ASSERT_EQ(ra.size(), rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_EQ(to_json(ra[i]), to_json(rb[i]));
  }
}

TEST(Table, JsonLinesRoundTrip) {
  kb::TripleIndex index(fixture_triples());
  const auto sides = split(index);
  const auto table = AlignmentTable::build(sides.enumerating, sides.counting, index, {});
  std::stringstream ss;
  write_table(ss, table);
  const auto back = read_table(ss);
  ASSERT_EQ(back.pairs().size(), table.pairs().size());
  for (std::size_t i = 0; i < back.pairs().size(); ++i) EXPECT_EQ(to_json(back.pairs()[i]), to_json(table.pairs()[i]));
}

TEST(Export, HeaderRowsAndAnomalies) {
  const auto r = records({{2, 2}, {3, 1}, {1, 4}});
  const auto csv = export_value_distribution(r);
  std::istringstream lines(csv);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "subject,n_e,v_c,anomaly");
  EXPECT_EQ(rows[2], "s1,3,1,1");
  EXPECT_EQ(rows[3], "s2,1,4,0");
}

TEST(Export, FixtureRoundTrip) {
  kb::TripleIndex index(fixture_triples());
  const auto pairs = build_cooccurrence({kOnt + "child"}, {kOnt + "numberOfChildren"}, index);
  ASSERT_EQ(pairs.size(), 1u);
  const auto& recs = pairs.begin()->second;
  ASSERT_GT(recs.size(), 50u);
  std::istringstream in(export_value_distribution(recs));
  EXPECT_EQ(parse_value_distribution(in), recs);
}
