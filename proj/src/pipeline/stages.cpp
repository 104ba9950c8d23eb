#include "counqer/pipeline/stages.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <httplib.h>

#include "counqer/align/alignment.hpp"
#include "counqer/classify/evaluation.hpp"
#include "counqer/error.hpp"
#include "counqer/eval/judgments.hpp"
#include "counqer/eval/transfer.hpp"
#include "counqer/kb/catalog.hpp"
#include "counqer/kb/json.hpp"
#include "counqer/stats/predicate_stats.hpp"
#include "counqer/text/embedding.hpp"
#include "counqer/text/frequency.hpp"
#include "counqer/text/tokenize.hpp"
#include "counqer/typing/type_profiler.hpp"
#include "counqer/version.hpp"

namespace counqer::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require(const fs::path& path, const std::string& stage) {
  if (!fs::is_regular_file(path)) throw MissingArtifact(stage, path.string());
}

std::ifstream open_in(const fs::path& path, const std::string& stage) {
  require(path, stage);
  std::ifstream in(path);
  if (!in) throw MissingArtifact(stage, path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

/// Configured input file: unset is a config error, absent is a missing artifact.
fs::path input_file(const fs::path& path, const char* key, const std::string& stage) {
  if (path.empty()) throw ConfigError(std::string("no path configured for ") + key);
  require(path, stage);
  return path;
}

kb::ParseOptions triple_options(const PipelineConfig& cfg, const fs::path& file) {
  kb::ParseOptions o;
  o.format = kb::TripleFormat::NTriples;
  o.kb = kb::KbTag::parse(cfg.kb);
  o.date_heuristic = cfg.date_heuristic;
  o.file_name = file.string();
  return o;
}

kb::TripleIndex load_index(const PipelineConfig& cfg) {
  const auto path = cfg.artifact("triples.nt");
  require(path, "ingest");
  return kb::TripleIndex::load(path.string(), triple_options(cfg, path));
}

std::vector<stats::PredicateStats> load_stats(const PipelineConfig& cfg) {
  auto in = open_in(cfg.artifact("stats.jsonl"), "stats");
  return stats::read_stats(in);
}

template <typename F>
void for_each_json_line(std::istream& in, const fs::path& path, F&& f) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      f(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::string features_name(SetKind k) { return "features_" + std::string(kind_name(k)) + ".jsonl"; }
std::string training_name(SetKind k) { return "training_" + std::string(kind_name(k)) + ".jsonl"; }
std::string model_name(SetKind k) { return "model_" + std::string(kind_name(k)) + ".json"; }

std::vector<classify::FeatureVector> load_features(const PipelineConfig& cfg, SetKind k) {
  const auto path = cfg.artifact(features_name(k));
  auto in = open_in(path, "features");
  std::vector<classify::FeatureVector> out;
  for_each_json_line(in, path, [&](const json& j) { out.push_back(classify::feature_vector_from_json(j)); });
  return out;
}

std::vector<classify::LabeledExample> load_training(const fs::path& path) {
  auto in = open_in(path, "train");
  std::vector<classify::LabeledExample> out;
  for_each_json_line(in, path, [&](const json& j) { out.push_back(classify::labeled_example_from_json(j)); });
  return out;
}

std::optional<text::EmbeddingTable> load_embeddings(const PipelineConfig& cfg, const std::string& stage) {
  if (cfg.embeddings.empty()) return std::nullopt;
  require(cfg.embeddings, stage);
  return text::EmbeddingTable::load_file(cfg.embeddings.string());
}

StageReport finish(const PipelineConfig& cfg, StageReport report) {
  write_manifest(cfg, report);
  return report;
}

}  // namespace

StageReport run_ingest(const PipelineConfig& cfg) {
  StageReport r{"ingest", {}, {}, json::object()};
  const auto input = input_file(cfg.input, "ingest.input", "input");
  r.inputs.push_back(input);

  kb::ParseOptions opts;
  opts.format = cfg.format;
  opts.kb = kb::KbTag::parse(cfg.kb);
  opts.date_heuristic = cfg.date_heuristic;
  opts.file_name = input.filename().string();

  std::ifstream in(input);
  auto errors_out = open_out(cfg.artifact("errors.log"));
  std::vector<kb::Triple> triples;
  std::size_t error_count = 0;
  kb::parse_triples(
      in, opts, [&](kb::Triple&& t) { triples.push_back(std::move(t)); },
      [&](kb::ParseError&& e) {
        errors_out << kb::to_json_line(e) << '\n';
        ++error_count;
      });
  const std::size_t parsed = triples.size();

  if (cfg.dedup) triples = kb::deduplicate(std::move(triples));
  const std::size_t after_dedup = triples.size();
  if (cfg.inverse) triples = kb::materialize_inverses(std::move(triples));

  auto out = open_out(cfg.artifact("triples.nt"));
  for (const auto& t : triples) out << kb::to_ntriples(t) << '\n';

  const auto counts = kb::count_by_predicate(triples);
  std::map<std::string, kb::PredicateId> ids;
  for (const auto& t : triples) ids.emplace(t.predicate.iri, t.predicate);
  auto catalog = open_out(cfg.artifact("catalog.jsonl"));
  for (const auto& [iri, count] : counts) {
    catalog << json{{"predicate", kb::to_json(ids.at(iri))}, {"triple_count", count}}.dump() << '\n';
  }

  r.outputs = {cfg.artifact("triples.nt"), cfg.artifact("errors.log"), cfg.artifact("catalog.jsonl")};
  r.summary = {{"parsed", parsed},
               {"errors", error_count},
               {"after_dedup", after_dedup},
               {"triples", triples.size()},
               {"predicates", counts.size()}};
  return finish(cfg, std::move(r));
}

StageReport run_stats(const PipelineConfig& cfg) {
  StageReport r{"stats", {cfg.artifact("triples.nt")}, {}, json::object()};
  const auto index = load_index(cfg);

  std::map<std::string, std::size_t> counts;
  for (const auto& p : index.predicates()) counts[p.iri] = index.triples_of(p.iri).size();
  const auto frequent = kb::filter_frequent(counts, cfg.min_count);

  std::vector<stats::PredicateStats> all;
  for (const auto& iri : frequent) {
    stats::StatsAccumulator acc(index.predicate(iri));
    for (const kb::Triple* t : index.triples_of(iri)) acc.add(*t);
    all.push_back(acc.finish());
  }
  auto out = open_out(cfg.artifact("stats.jsonl"));
  stats::write_stats(out, all);

  r.outputs = {cfg.artifact("stats.jsonl")};
  r.summary = {{"predicates", counts.size()}, {"frequent", all.size()}, {"min_count", cfg.min_count}};
  return finish(cfg, std::move(r));
}

StageReport run_profile(const PipelineConfig& cfg) {
  StageReport r{"profile", {cfg.artifact("triples.nt"), cfg.artifact("stats.jsonl")}, {}, json::object()};
  const auto stats = load_stats(cfg);
  const auto index = load_index(cfg);
  const auto class_map_path = input_file(cfg.class_map, "profile.class_map", "profile");
  r.inputs.push_back(class_map_path);
  const auto class_map = typing::ClassMap::load_file(class_map_path.string());

  auto out = open_out(cfg.artifact("profiles.jsonl"));
  std::map<std::string, std::size_t> domains;
  for (const auto& s : stats) {
    const auto profile = typing::profile_predicate(index, s.predicate.iri, class_map, cfg.samples, cfg.seed);
    ++domains[std::string(typing::class_name(profile.domain))];
    out << typing::to_json(profile).dump() << '\n';
  }
  r.outputs = {cfg.artifact("profiles.jsonl")};
  r.summary = {{"profiles", stats.size()}, {"domains", domains}};
  return finish(cfg, std::move(r));
}

StageReport run_features(const PipelineConfig& cfg) {
  StageReport r{"features", {cfg.artifact("stats.jsonl"), cfg.artifact("profiles.jsonl")}, {}, json::object()};
  const auto stats = load_stats(cfg);
  std::map<std::string, typing::TypeProfile> profiles;
  {
    const auto path = cfg.artifact("profiles.jsonl");
    auto in = open_in(path, "profile");
    for_each_json_line(in, path, [&](const json& j) {
      auto p = typing::profile_from_json(j);
      profiles.emplace(p.predicate.iri, std::move(p));
    });
  }

  text::FrequencyTable freq;
  if (!cfg.freq_table.empty()) {
    r.inputs.push_back(input_file(cfg.freq_table, "features.freq_table", "features"));
    freq = text::FrequencyTable::load_file(cfg.freq_table.string());
  }
  std::optional<text::EmbeddingTable> embeddings;
  if (cfg.embedding_columns) {
    embeddings = load_embeddings(cfg, "features");
    if (!embeddings) throw ConfigError("features.embedding_columns needs features.embeddings");
    r.inputs.push_back(cfg.embeddings);
  }

  std::size_t missing_ratio = 0;
  json written = json::object();
  for (SetKind kind : cfg.feature_kinds) {
    auto out = open_out(cfg.artifact(features_name(kind)));
    std::size_t n = 0;
    for (const auto& s : stats) {
      if (kind == SetKind::Counting && s.predicate.inverted) continue;
      const auto it = profiles.find(s.predicate.iri);
      if (it == profiles.end()) throw MissingArtifact("profile", "profile for " + s.predicate.iri);

      std::optional<double> ratio;
      try {
        ratio = text::plural_singular_ratio(freq, text::inflect(s.predicate.base_label));
      } catch (const Error&) {
        ratio.reset();
      }
      if (!ratio && kind == cfg.feature_kinds.front()) ++missing_ratio;

      std::optional<Eigen::VectorXd> emb;
      if (embeddings) {
        const auto tokens = text::tokenize_label(s.predicate.base_label);
        emb = text::embed_label(tokens, *embeddings);
        if (!emb) emb = Eigen::VectorXd::Zero(embeddings->dimension());
      }
      out << classify::to_json(classify::assemble_features(s, it->second, ratio, kind, emb)).dump() << '\n';
      ++n;
    }
    r.outputs.push_back(cfg.artifact(features_name(kind)));
    written[std::string(kind_name(kind))] = n;
  }
  r.summary = {{"vectors", written}, {"missing_ratio", missing_ratio}};
  return finish(cfg, std::move(r));
}

StageReport run_train(const PipelineConfig& cfg) {
  StageReport r{"train", {}, {}, json::object()};
  const auto labels_path = input_file(cfg.class_judgments, "train.labels", "train");
  r.inputs.push_back(labels_path);
  std::vector<eval::ClassJudgment> judgments;
  {
    std::ifstream in(labels_path);
    judgments = eval::read_class_judgments(in);
  }
  const auto spec = cfg.model_spec();

  for (SetKind kind : cfg.feature_kinds) {
    r.inputs.push_back(cfg.artifact(features_name(kind)));
    const auto features = load_features(cfg, kind);
    std::map<std::string, const classify::FeatureVector*> by_iri;
    for (const auto& f : features) by_iri.emplace(f.predicate.iri, &f);

    std::vector<classify::LabeledExample> examples;
    std::size_t dropped = 0, unmatched = 0;
    std::set<std::string> seen;
    for (const auto& j : judgments) {
      if (j.kind != kind) continue;
      const auto agg = eval::aggregate_class_judgments(j);
      if (!agg.label) {
        ++dropped;
        continue;
      }
      const auto it = by_iri.find(j.predicate.iri);
      if (it == by_iri.end()) {
        ++unmatched;
        continue;
      }
      if (!seen.insert(j.predicate.iri).second) throw Error("duplicate judgment for " + j.predicate.iri);
      examples.push_back({*it->second, *agg.label, j.predicate.kb});
    }
    std::sort(examples.begin(), examples.end(), [](const auto& a, const auto& b) {
      return a.features.predicate.iri < b.features.predicate.iri;
    });

    auto out = open_out(cfg.artifact(training_name(kind)));
    for (const auto& e : examples) out << classify::to_json(e).dump() << '\n';
    out.close();

    const auto model = classify::train(examples, spec, cfg.seed);
    auto mout = open_out(cfg.artifact(model_name(kind)));
    mout << classify::to_json(model).dump(2) << '\n';

    std::size_t positives = 0;
    for (const auto& e : examples) positives += e.label ? 1 : 0;
    r.outputs.push_back(cfg.artifact(training_name(kind)));
    r.outputs.push_back(cfg.artifact(model_name(kind)));
    r.summary[std::string(kind_name(kind))] = {{"examples", examples.size()},
                                               {"positives", positives},
                                               {"dropped", dropped},
                                               {"unmatched", unmatched},
                                               {"model", std::string(classify::model_kind_name(model.kind))},
                                               {"lambda", model.lambda},
                                               {"converged", model.converged}};
  }
  return finish(cfg, std::move(r));
}

StageReport run_classify(const PipelineConfig& cfg) {
  StageReport r{"classify", {}, {}, json::object()};
  std::map<SetKind, std::pair<fs::path, classify::TrainedModel>> models;
  auto load_model = [&](const fs::path& path) {
    auto in = open_in(path, "train");
    try {
      auto m = classify::model_from_json(json::parse(in));
      const SetKind k = m.feature_kind;
      models.insert_or_assign(k, std::pair{path, std::move(m)});
    } catch (const json::exception& e) {
      throw Error(path.string() + ": " + e.what());
    }
  };
  if (cfg.model_files.empty()) {
    for (SetKind kind : cfg.feature_kinds) load_model(cfg.artifact(model_name(kind)));
  } else {
    for (const auto& p : cfg.model_files) load_model(p);
  }

  auto out = open_out(cfg.artifact("classification.jsonl"));
  for (SetKind kind : cfg.feature_kinds) {
    const auto found = models.find(kind);
    if (found == models.end()) throw MissingArtifact("train", "model for " + std::string(kind_name(kind)));
    const auto& [model_path, model] = found->second;
    r.inputs.push_back(model_path);
    r.inputs.push_back(cfg.artifact(features_name(kind)));
    const auto features = load_features(cfg, kind);

    std::size_t positive = 0, filtered = 0, selected = 0;
    for (const auto& f : features) {
      const bool identifier = classify::identifier_filter(f.predicate.base_label);
      if (identifier && cfg.id_filter == IdFilterMode::Pre) {
        ++filtered;
        continue;
      }
      const auto p = classify::predict(model, f);
      const bool drop = identifier && cfg.id_filter == IdFilterMode::Post && p.label;
      positive += p.label ? 1 : 0;
      filtered += drop ? 1 : 0;
      selected += p.label && !drop ? 1 : 0;
      out << json{{"predicate", kb::to_json(f.predicate)},
                  {"kind", std::string(kind_name(kind))},
                  {"probability", p.probability},
                  {"label", p.label},
                  {"identifier", identifier},
                  {"selected", p.label && !drop}}
                 .dump()
          << '\n';
    }
    r.summary[std::string(kind_name(kind))] = {
        {"vectors", features.size()}, {"positive", positive}, {"filtered", filtered}, {"selected", selected}};
  }
  r.outputs = {cfg.artifact("classification.jsonl")};
  r.summary["id_filter"] = std::string(id_filter_name(cfg.id_filter));
  return finish(cfg, std::move(r));
}

StageReport run_align(const PipelineConfig& cfg) {
  StageReport r{"align", {cfg.artifact("classification.jsonl"), cfg.artifact("triples.nt")}, {}, json::object()};
  std::vector<std::string> enumerating, counting;
  {
    const auto path = cfg.artifact("classification.jsonl");
    auto in = open_in(path, "classification");
    for_each_json_line(in, path, [&](const json& j) {
      if (!j.at("selected").get<bool>()) return;
      const auto iri = kb::predicate_from_json(j.at("predicate")).iri;
      (parse_kind(j.at("kind").get<std::string>()) == SetKind::Counting ? counting : enumerating).push_back(iri);
    });
  }
  const auto index = load_index(cfg);
  const auto embeddings = load_embeddings(cfg, "align");
  if (embeddings) r.inputs.push_back(cfg.embeddings);

  align::AlignmentOptions opts;
  opts.aggregation = cfg.aggregation;
  opts.min_support = cfg.min_support;
  opts.combine = cfg.combine;
  opts.embeddings = embeddings ? &*embeddings : nullptr;
  const auto table = align::AlignmentTable::build(enumerating, counting, index, opts);

  auto out = open_out(cfg.artifact("alignments.jsonl"));
  align::write_table(out, table);

  auto rout = open_out(cfg.artifact("rankings.jsonl"));
  std::size_t ranked_sources = 0;
  for (Direction d : cfg.directions) {
    const auto& sources = d == Direction::CountingToEnumerating ? table.counting() : table.enumerating();
    for (const auto& src : sources) {
      const auto ranked = align::rank_alignments(table, src.iri, d, cfg.k, cfg.min_support, cfg.combine);
      json list = json::array();
      for (const auto& p : ranked) {
        list.push_back({{"target", p.target(d).iri}, {"combined", *p.combined(d)}, {"support", p.support}});
      }
      ranked_sources += ranked.empty() ? 0 : 1;
      rout << json{{"source", src.iri}, {"direction", std::string(direction_name(d))}, {"ranked", list}}.dump()
           << '\n';
    }
  }
  std::size_t supported = 0;
  for (const auto& p : table.pairs()) supported += p.support >= cfg.min_support ? 1 : 0;
  r.outputs = {cfg.artifact("alignments.jsonl"), cfg.artifact("rankings.jsonl")};
  r.summary = {{"enumerating", enumerating.size()},
               {"counting", counting.size()},
               {"pairs", table.pairs().size()},
               {"supported_pairs", supported},
               {"sources_with_alignments", ranked_sources}};
  return finish(cfg, std::move(r));
}

namespace {

struct NdcgRow {
  std::string name;
  std::map<std::string, double> cells;  // "Counting@1" -> mean NDCG
};

std::string column_name(Direction d, std::size_t k) {
  return (d == Direction::CountingToEnumerating ? "Counting@" : "Enumerating@") + std::to_string(k);
}

json model_selection(const PipelineConfig& cfg, std::string& text_out) {
  json out = json::object();
  char buf[160];
  for (SetKind kind : cfg.feature_kinds) {
    const auto path = cfg.artifact(training_name(kind));
    if (!fs::is_regular_file(path)) continue;
    const auto examples = load_training(path);
    std::size_t pos = 0;
    for (const auto& e : examples) pos += e.label ? 1 : 0;
    json rows = json::array();
    std::snprintf(buf, sizeof buf, "\nModel selection (%s, %zu examples, leave-one-out)\n%-10s %9s %9s %9s\n",
                  std::string(kind_name(kind)).c_str(), examples.size(), "model", "P", "R", "F1");
    text_out += buf;
    for (auto mk : {classify::ModelKind::Logistic, classify::ModelKind::Prior, classify::ModelKind::Lasso,
                    classify::ModelKind::Neural}) {
      if (examples.size() < 3) break;
      const auto res = classify::loo_cv(examples, classify::ModelSpec::of(mk), cfg.seed);
      const std::string name(classify::model_kind_name(mk));
      rows.push_back({{"model", name},
                      {"scores", eval::to_json(res.scores)},
                      {"trained_folds", res.trained_folds},
                      {"skipped_folds", res.skipped_folds}});
      std::snprintf(buf, sizeof buf, "%-10s %9.1f %9.1f %9.1f\n", name.c_str(), res.scores.precision,
                    res.scores.recall, res.scores.f1);
      text_out += buf;
    }
    if (!examples.empty()) {
      const auto rb = classify::random_baseline(pos, examples.size() - pos);
      rows.push_back({{"model", "random"}, {"scores", eval::to_json(rb)}});
      std::snprintf(buf, sizeof buf, "%-10s %9.1f %9.1f %9.1f\n", "random", rb.precision, rb.recall, rb.f1);
      text_out += buf;
    }
    out[std::string(kind_name(kind))] = rows;
  }
  return out;
}

}  // namespace

StageReport run_evaluate(const PipelineConfig& cfg, bool transfer) {
  StageReport r{"evaluate", {cfg.artifact("alignments.jsonl")}, {}, json::object()};
  align::AlignmentTable table;
  {
    auto in = open_in(cfg.artifact("alignments.jsonl"), "align");
    table = align::read_table(in);
  }
  const auto judgments_path = input_file(cfg.relevance_judgments, "evaluate.judgments", "evaluate");
  r.inputs.push_back(judgments_path);
  std::vector<eval::RelevanceJudgment> judgments;
  {
    std::ifstream in(judgments_path);
    judgments = eval::read_relevance_judgments(in);
  }

  std::map<std::tuple<Direction, std::string, std::string>, double> grades;
  std::map<Direction, std::set<std::string>> sources;
  for (const auto& j : judgments) {
    grades[{j.direction, j.source, j.target}] = eval::aggregate_relevance(j);
    if (table.is_source(j.source, j.direction)) sources[j.direction].insert(j.source);
  }

  std::vector<NdcgRow> rows;
  std::vector<std::string> row_names;
  for (auto m : align::kAllMetrics) row_names.emplace_back(align::metric_name(m));
  row_names.emplace_back("combined");
  const std::size_t unlimited = std::numeric_limits<std::size_t>::max();

  std::vector<std::string> columns;
  for (Direction d : {Direction::CountingToEnumerating, Direction::EnumeratingToCounting}) {
    for (auto k : cfg.ndcg_k) columns.push_back(column_name(d, k));
  }
  for (const auto& name : row_names) {
    NdcgRow row{name, {}};
    for (Direction d : {Direction::CountingToEnumerating, Direction::EnumeratingToCounting}) {
      std::map<std::size_t, double> sum;
      for (const auto& src : sources[d]) {
        const auto ranked = name == "combined"
                                ? align::rank_alignments(table, src, d, unlimited, cfg.min_support, cfg.combine)
                                : align::rank_by_metric(table, src, d, align::parse_metric(name), unlimited,
                                                        cfg.min_support);
        std::vector<double> g;
        for (const auto& p : ranked) {
          const auto it = grades.find({d, src, p.target(d).iri});
          g.push_back(it == grades.end() ? 0.0 : it->second);
        }
        for (auto k : cfg.ndcg_k) sum[k] += eval::ndcg_at_k(g, k);
      }
      const double n = static_cast<double>(sources[d].size());
      for (auto k : cfg.ndcg_k) row.cells[column_name(d, k)] = n > 0 ? sum[k] / n : 0.0;
    }
    rows.push_back(std::move(row));
  }

  json ndcg_rows = json::array();
  std::string text = "Average NDCG of alignment rankings\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-20s", "metric");
  text += buf;
  for (const auto& c : columns) {
    std::snprintf(buf, sizeof buf, " %14s", c.c_str());
    text += buf;
  }
  text += '\n';
  for (const auto& row : rows) {
    json cells = json::object();
    std::snprintf(buf, sizeof buf, "%-20s", row.name.c_str());
    text += buf;
    for (const auto& c : columns) {
      cells[c] = row.cells.at(c);
      std::snprintf(buf, sizeof buf, " %14.3f", row.cells.at(c));
      text += buf;
    }
    text += '\n';
    ndcg_rows.push_back({{"metric", row.name}, {"ndcg", cells}});
  }
  std::snprintf(buf, sizeof buf, "sources: counting %zu, enumerating %zu\n",
                sources[Direction::CountingToEnumerating].size(), sources[Direction::EnumeratingToCounting].size());
  text += buf;

  const json selection = model_selection(cfg, text);
  json report{{"columns", columns},
              {"rows", ndcg_rows},
              {"sources",
               {{"counting", sources[Direction::CountingToEnumerating].size()},
                {"enumerating", sources[Direction::EnumeratingToCounting].size()}}},
              {"model_selection", selection}};

  auto out = open_out(cfg.artifact("evaluation.json"));
  out << report.dump(2) << '\n';
  auto tout = open_out(cfg.artifact("evaluation.txt"));
  tout << text;
  r.outputs = {cfg.artifact("evaluation.json"), cfg.artifact("evaluation.txt")};

  if (transfer) {
    std::map<std::string, std::vector<classify::LabeledExample>> by_kb;
    json grids = json::object();
    std::string ttext;
    for (SetKind kind : cfg.feature_kinds) {
      const auto path = cfg.artifact(training_name(kind));
      by_kb.clear();
      for (auto& e : load_training(path)) by_kb[e.kb.name()].push_back(std::move(e));
      const auto grid = eval::transfer_matrix(by_kb, cfg.model_spec(), cfg.seed);
      grids[std::string(kind_name(kind))] = eval::to_json(grid);
      ttext += "Transfer F1 (" + std::string(kind_name(kind)) + ")\n" + eval::render_table(grid) + "\n";
    }
    auto jout = open_out(cfg.artifact("transfer.json"));
    jout << grids.dump(2) << '\n';
    auto txt = open_out(cfg.artifact("transfer.txt"));
    txt << ttext;
    r.outputs.push_back(cfg.artifact("transfer.json"));
    r.outputs.push_back(cfg.artifact("transfer.txt"));
  }
  r.summary = {{"judgments", judgments.size()}, {"table", text}};
  return finish(cfg, std::move(r));
}

StageReport run_export_distribution(const PipelineConfig& cfg, const std::string& e_iri, const std::string& c_iri,
                                    const fs::path& output) {
  StageReport r{"export-distribution", {cfg.artifact("alignments.jsonl"), cfg.artifact("triples.nt")}, {}, {}};
  align::AlignmentTable table;
  {
    auto in = open_in(cfg.artifact("alignments.jsonl"), "align");
    table = align::read_table(in);
  }
  if (!table.find(e_iri, c_iri)) throw Error("no aligned pair (" + e_iri + ", " + c_iri + ")");
  const auto index = load_index(cfg);
  const auto records = align::join_records(align::collect_subjects(index, e_iri, cfg.aggregation),
                                           align::collect_subjects(index, c_iri, cfg.aggregation));
  auto out = open_out(output);
  out << align::export_value_distribution(records);
  std::size_t anomalies = 0;
  for (const auto& rec : records) anomalies += rec.v_c < rec.n_e ? 1 : 0;
  r.outputs = {output};
  r.summary = {{"rows", records.size()}, {"anomalies", anomalies}};
  return finish(cfg, std::move(r));
}

std::vector<StageReport> run_all(const PipelineConfig& cfg) {
  std::vector<StageReport> out;
  out.push_back(run_ingest(cfg));
  out.push_back(run_stats(cfg));
  out.push_back(run_profile(cfg));
  out.push_back(run_features(cfg));
  out.push_back(run_train(cfg));
  out.push_back(run_classify(cfg));
  out.push_back(run_align(cfg));
  if (!cfg.relevance_judgments.empty()) out.push_back(run_evaluate(cfg, false));
  return out;
}

namespace {

json file_entry(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return {{"path", p.string()}, {"fnv1a", fnv1a_hex(ss.str())}};
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void write_manifest(const PipelineConfig& cfg, const StageReport& report) {
  json inputs = json::array(), outputs = json::array();
  for (const auto& p : report.inputs) inputs.push_back(file_entry(p));
  for (const auto& p : report.outputs) outputs.push_back(file_entry(p));
  const json manifest{{"stage", report.stage},
                      {"inputs", inputs},
                      {"outputs", outputs},
                      {"config_hash", fnv1a_hex(to_json(cfg).dump())},
                      {"seed", cfg.seed},
                      {"versions",
                       {{"counqer", std::string(kVersion)},
                        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                      "." + std::to_string(EIGEN_MINOR_VERSION)},
                        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                        {"cpp_httplib", CPPHTTPLIB_VERSION}}},
                      {"summary", report.summary},
                      {"timestamp", utc_now()}};
  auto out = open_out(cfg.artifact("manifest_" + report.stage + ".json"));
  out << manifest.dump(2) << '\n';
}

}  // namespace counqer::pipeline
