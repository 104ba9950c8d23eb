#include "counqer/align/alignment.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include "counqer/error.hpp"
#include "counqer/kb/json.hpp"
#include "counqer/text/tokenize.hpp"

namespace counqer::align {

std::string_view combine_mode_name(CombineMode m) { return m == CombineMode::Raw ? "raw" : "normalized"; }

CombineMode parse_combine_mode(std::string_view name) {
  if (name == "normalized") return CombineMode::Normalized;
  if (name == "raw") return CombineMode::Raw;
  throw ConfigError("unknown combine mode: " + std::string(name));
}

AlignmentPair score_pair(const kb::PredicateId& e, const kb::PredicateId& c, const PredicateSubjects& se,
                         const PredicateSubjects& sc, std::size_t n_subjects,
                         const text::EmbeddingTable* embeddings) {
  AlignmentPair p;
  p.e = e;
  p.c = c;
  p.n_subjects_e = se.subjects.size();
  p.n_subjects_c = sc.subjects.size();
  p.n_subjects_total = n_subjects;
  p.support = shared_subjects(se, sc);

  const PairCounts counts{p.n_subjects_e, p.n_subjects_c, p.support, n_subjects};
  p.score(Metric::Absolute) = metric_absolute(counts);
  p.score(Metric::Jaccard) = metric_jaccard(counts);
  p.score(Metric::ConditionalE) = metric_conditional_e(counts);
  p.score(Metric::ConditionalC) = metric_conditional_c(counts);
  p.score(Metric::Pmi) = metric_pmi(counts);

  const auto records = join_records(se, sc);
  auto put = [&](Metric m, Scored s) {
    p.score(m) = s.value;
    if (!s.defined) p.undefined.insert(std::string(metric_name(m)));
  };
  put(Metric::PerfectMatchRatio, metric_perfect_match_ratio(records));
  put(Metric::Correlation, metric_correlation(records));
  put(Metric::PtileVm, metric_ptile_vm(records));

  if (embeddings) {
    const auto te = text::tokenize_label(e.base_label);
    const auto tc = text::tokenize_label(c.base_label);
    p.score(Metric::CosineSim) =
        text::cosine_similarity(text::embed_label(te, *embeddings), text::embed_label(tc, *embeddings));
  }
  return p;
}

AlignmentTable::AlignmentTable(std::vector<kb::PredicateId> enumerating, std::vector<kb::PredicateId> counting,
                               std::vector<AlignmentPair> pairs)
    : enumerating_(std::move(enumerating)), counting_(std::move(counting)), pairs_(std::move(pairs)) {
  std::sort(enumerating_.begin(), enumerating_.end());
  std::sort(counting_.begin(), counting_.end());
  std::sort(pairs_.begin(), pairs_.end(), [](const AlignmentPair& a, const AlignmentPair& b) {
    if (a.e.iri != b.e.iri) return a.e.iri < b.e.iri;
    return a.c.iri < b.c.iri;
  });
}

AlignmentTable AlignmentTable::build(const std::vector<std::string>& enumerating,
                                     const std::vector<std::string>& counting, const kb::TripleIndex& index,
                                     const AlignmentOptions& options) {
  std::vector<kb::PredicateId> es, cs;
  std::map<std::string, PredicateSubjects> views;
  for (const auto& iri : enumerating) {
    if (!index.has_predicate(iri)) continue;
    es.push_back(index.predicate(iri));
    views.emplace(iri, collect_subjects(index, iri, options.aggregation));
  }
  for (const auto& iri : counting) {
    if (!index.has_predicate(iri)) continue;
    cs.push_back(index.predicate(iri));
    views.emplace(iri, collect_subjects(index, iri, options.aggregation));
  }

  std::vector<AlignmentPair> pairs;
  for (const auto& e : es) {
    for (const auto& c : cs) {
      if (e.iri == c.iri || !(e.kb == c.kb)) continue;
      const auto& se = views.at(e.iri);
      const auto& sc = views.at(c.iri);
      if (shared_subjects(se, sc) == 0) continue;
      pairs.push_back(score_pair(e, c, se, sc, index.subject_count(), options.embeddings));
    }
  }
  AlignmentTable table(std::move(es), std::move(cs), std::move(pairs));
  table.assign_combined(options.min_support, options.combine);
  return table;
}

const AlignmentPair* AlignmentTable::find(std::string_view e_iri, std::string_view c_iri) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::pair{e_iri, c_iri},
                             [](const AlignmentPair& p, const std::pair<std::string_view, std::string_view>& key) {
                               if (p.e.iri != key.first) return p.e.iri < key.first;
                               return p.c.iri < key.second;
                             });
  if (it == pairs_.end() || it->e.iri != e_iri || it->c.iri != c_iri) return nullptr;
  return &*it;
}

bool AlignmentTable::is_source(std::string_view iri, Direction d) const {
  const auto& list = d == Direction::CountingToEnumerating ? counting_ : enumerating_;
  return std::any_of(list.begin(), list.end(), [&](const kb::PredicateId& p) { return p.iri == iri; });
}

std::vector<const AlignmentPair*> AlignmentTable::candidates(std::string_view iri, Direction d) const {
  std::vector<const AlignmentPair*> out;
  for (const auto& p : pairs_) {
    if (p.source(d).iri == iri) out.push_back(&p);
  }
  return out;
}

void AlignmentTable::assign_combined(std::size_t min_support, const CombineConfig& config) {
  for (auto& p : pairs_) {
    p.combined_c2e.reset();
    p.combined_e2c.reset();
  }
  for (Direction d : {Direction::CountingToEnumerating, Direction::EnumeratingToCounting}) {
    std::map<std::string, std::vector<AlignmentPair*>> pools;
    for (auto& p : pairs_) {
      if (p.support >= min_support) pools[p.source(d).iri].push_back(&p);
    }
    for (auto& [source, pool] : pools) {
      std::vector<const AlignmentPair*> view(pool.begin(), pool.end());
      for (AlignmentPair* p : pool) {
        const double v = combined_score(*p, view, d, config);
        (d == Direction::CountingToEnumerating ? p->combined_c2e : p->combined_e2c) = v;
      }
    }
  }
}

double combined_score(const AlignmentPair& pair, std::span<const AlignmentPair* const> pool, Direction d,
                      const CombineConfig& config) {
  const auto& reps = config.representatives(d);
  if (reps.empty()) throw ConfigError("combined score needs at least one representative metric");
  double sum = 0.0;
  for (Metric m : reps) {
    const double x = pair.score(m);
    if (config.mode == CombineMode::Raw) {
      sum += x;
      continue;
    }
    double lo = x, hi = x;
    for (const AlignmentPair* q : pool) {
      lo = std::min(lo, q->score(m));
      hi = std::max(hi, q->score(m));
    }
    sum += hi == lo ? 1.0 : (x - lo) / (hi - lo);
  }
  return sum / static_cast<double>(reps.size());
}

namespace {

std::vector<AlignmentPair> ranked(const AlignmentTable& table, std::string_view source, Direction d, std::size_t k,
                                  std::size_t min_support,
                                  const std::function<double(const AlignmentPair&)>& key_of) {
  if (!table.is_source(source, d)) {
    throw Error("unknown " + std::string(kind_name(source_kind(d))) + " predicate: " + std::string(source));
  }
  std::vector<AlignmentPair> out;
  for (const AlignmentPair* p : table.candidates(source, d)) {
    if (p->support >= min_support) out.push_back(*p);
  }
  std::vector<double> keys;
  std::vector<std::size_t> order(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    keys.push_back(key_of(out[i]));
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] > keys[b];
    if (out[a].support != out[b].support) return out[a].support > out[b].support;
    return out[a].target(d).iri < out[b].target(d).iri;
  });
  std::vector<AlignmentPair> sorted;
  for (std::size_t i = 0; i < order.size() && sorted.size() < k; ++i) sorted.push_back(std::move(out[order[i]]));
  return sorted;
}

}  // namespace

std::vector<AlignmentPair> rank_alignments(const AlignmentTable& table, std::string_view source, Direction d,
                                           std::size_t k, std::size_t min_support, const CombineConfig& config) {
  std::vector<const AlignmentPair*> pool;
  if (table.is_source(source, d)) {
    for (const AlignmentPair* p : table.candidates(source, d)) {
      if (p->support >= min_support) pool.push_back(p);
    }
  }
  auto out = ranked(table, source, d, k, min_support,
                    [&](const AlignmentPair& p) { return combined_score(p, pool, d, config); });
  for (auto& p : out) {
    (d == Direction::CountingToEnumerating ? p.combined_c2e : p.combined_e2c) = combined_score(p, pool, d, config);
  }
  return out;
}

std::vector<AlignmentPair> rank_by_metric(const AlignmentTable& table, std::string_view source, Direction d,
                                          Metric metric, std::size_t k, std::size_t min_support) {
  return ranked(table, source, d, k, min_support, [&](const AlignmentPair& p) { return p.score(metric); });
}

nlohmann::json to_json(const AlignmentPair& p) {
  nlohmann::json scores = nlohmann::json::object();
  for (Metric m : kAllMetrics) scores[std::string(metric_name(m))] = p.score(m);
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return nlohmann::json{{"e", kb::to_json(p.e)},
                        {"c", kb::to_json(p.c)},
                        {"kb", p.kb().name()},
                        {"support", p.support},
                        {"scores", scores},
                        {"undefined", p.undefined},
                        {"combined", {{"c2e", opt(p.combined_c2e)}, {"e2c", opt(p.combined_e2c)}}},
                        {"n_subjects_e", p.n_subjects_e},
                        {"n_subjects_c", p.n_subjects_c},
                        {"n_subjects_total", p.n_subjects_total}};
}

AlignmentPair alignment_pair_from_json(const nlohmann::json& j) {
  AlignmentPair p;
  p.e = kb::predicate_from_json(j.at("e"));
  p.c = kb::predicate_from_json(j.at("c"));
  p.support = j.at("support").get<std::size_t>();
  const auto& scores = j.at("scores");
  for (Metric m : kAllMetrics) p.score(m) = scores.at(std::string(metric_name(m))).get<double>();
  p.undefined = j.value("undefined", std::set<std::string>{});
  if (j.contains("combined")) {
    const auto& c = j.at("combined");
    if (c.contains("c2e") && !c.at("c2e").is_null()) p.combined_c2e = c.at("c2e").get<double>();
    if (c.contains("e2c") && !c.at("e2c").is_null()) p.combined_e2c = c.at("e2c").get<double>();
  }
  p.n_subjects_e = j.at("n_subjects_e").get<std::size_t>();
  p.n_subjects_c = j.at("n_subjects_c").get<std::size_t>();
  p.n_subjects_total = j.at("n_subjects_total").get<std::size_t>();
  return p;
}

void write_table(std::ostream& out, const AlignmentTable& table) {
  for (const auto& p : table.pairs()) out << to_json(p).dump() << '\n';
}

AlignmentTable read_table(std::istream& in) {
  std::vector<AlignmentPair> pairs;
  std::map<std::string, kb::PredicateId> es, cs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto p = alignment_pair_from_json(nlohmann::json::parse(line));
      es.emplace(p.e.iri, p.e);
      cs.emplace(p.c.iri, p.c);
      pairs.push_back(std::move(p));
    } catch (const nlohmann::json::exception& ex) {
      throw Error("alignment table line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  std::vector<kb::PredicateId> ev, cv;
  for (auto& [_, p] : es) ev.push_back(p);
  for (auto& [_, p] : cs) cv.push_back(p);
  return AlignmentTable(std::move(ev), std::move(cv), std::move(pairs));
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  return fields;
}

std::int64_t to_int(const std::string& s, std::size_t line_no) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error("distribution line " + std::to_string(line_no) + ": not an integer: " + s);
  }
  return v;
}

}  // namespace

std::string export_value_distribution(std::span<const CooccurrenceRecord> records) {
  std::vector<const CooccurrenceRecord*> rows;
  for (const auto& r : records) rows.push_back(&r);
  std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->subject < b->subject; });
  std::string out = "subject,n_e,v_c,anomaly\n";
  for (const auto* r : rows) {
    out += csv_field(r->subject) + ',' + std::to_string(r->n_e) + ',' + std::to_string(r->v_c) + ',' +
           (r->v_c < r->n_e ? "1" : "0") + '\n';
  }
  return out;
}

std::vector<CooccurrenceRecord> parse_value_distribution(std::istream& in) {
  std::vector<CooccurrenceRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "subject,n_e,v_c,anomaly") throw Error("distribution: unexpected header: " + line);
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 4) throw Error("distribution line " + std::to_string(line_no) + ": expected 4 fields");
    out.push_back({f[0], to_int(f[1], line_no), to_int(f[2], line_no)});
  }
  return out;
}

}  // namespace counqer::align
