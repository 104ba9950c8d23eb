// counqer: command-line driver for the set-predicate pipeline.

#include <csignal>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "counqer/error.hpp"
#include "counqer/pipeline/stages.hpp"
#include "counqer/service/query_service.hpp"

namespace {

using namespace counqer;
namespace fs = std::filesystem;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitMissing = 3;

struct Overrides {
  std::string config;
  std::optional<std::string> work_dir;
  std::optional<std::uint64_t> seed;

  std::optional<std::string> input, format, kb;
  std::optional<bool> inverse, dedup;
  std::optional<std::size_t> min_count;
  std::optional<std::string> class_map;
  std::optional<std::size_t> samples;
  std::optional<std::string> freq_table, embeddings, kind;
  std::optional<std::string> model, labels;
  std::vector<std::string> model_files;
  std::optional<std::string> id_filter;
  std::optional<std::size_t> min_support, k;
  std::optional<std::string> direction, combine;
  std::optional<std::string> judgments, ndcg_k;
  bool transfer = false;
  std::string pair;
  std::optional<std::string> output;
  std::optional<std::string> host;
  std::optional<int> port;
  std::optional<std::size_t> workers;
};

std::vector<SetKind> kinds_of(const std::string& s) {
  if (s == "both") return {SetKind::Enumerating, SetKind::Counting};
  return {parse_kind(s)};
}

std::vector<Direction> directions_of(const std::string& s) {
  if (s == "both") return {Direction::CountingToEnumerating, Direction::EnumeratingToCounting};
  return {parse_direction(s)};
}

std::vector<std::size_t> parse_k_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoul(item, &used);
      if (used != item.size() || v == 0) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad --ndcg-k value: " + s);
    }
  }
  if (out.empty()) throw ConfigError("bad --ndcg-k value: " + s);
  return out;
}

pipeline::PipelineConfig effective_config(const Overrides& o) {
  auto c = pipeline::load_config(o.config);
  if (o.work_dir) c.work_dir = *o.work_dir;
  if (o.seed) c.seed = *o.seed;
  if (o.input) c.input = *o.input;
  if (o.format) c.format = kb::parse_format(*o.format);
  if (o.kb) c.kb = *o.kb;
  if (o.inverse) c.inverse = *o.inverse;
  if (o.dedup) c.dedup = *o.dedup;
  if (o.min_count) c.min_count = *o.min_count;
  if (o.class_map) c.class_map = *o.class_map;
  if (o.samples) c.samples = *o.samples;
  if (o.freq_table) c.freq_table = *o.freq_table;
  if (o.embeddings) c.embeddings = *o.embeddings;
  if (o.kind) c.feature_kinds = kinds_of(*o.kind);
  if (o.model) c.model = classify::parse_model_kind(*o.model);
  if (o.labels) c.class_judgments = *o.labels;
  for (const auto& f : o.model_files) c.model_files.emplace_back(f);
  if (o.id_filter) c.id_filter = pipeline::parse_id_filter(*o.id_filter);
  if (o.min_support) c.min_support = *o.min_support;
  if (o.k) {
    if (*o.k == 0) throw ConfigError("--k must be at least 1");
    c.k = *o.k;
  }
  if (o.direction) c.directions = directions_of(*o.direction);
  if (o.combine) c.combine.mode = align::parse_combine_mode(*o.combine);
  if (o.judgments) c.relevance_judgments = *o.judgments;
  if (o.ndcg_k) c.ndcg_k = parse_k_list(*o.ndcg_k);
  if (o.host) c.host = *o.host;
  if (o.port) c.port = *o.port;
  if (o.workers) c.workers = *o.workers;
  return c;
}

void print(const pipeline::StageReport& r) {
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& p : r.outputs) outs.push_back(p.string());
  nlohmann::json summary = r.summary;
  if (summary.contains("table")) {
    std::cout << summary["table"].get<std::string>();
    summary.erase("table");
  }
  std::cout << nlohmann::json{{"stage", r.stage}, {"outputs", outs}, {"summary", summary}}.dump() << '\n';
}

int serve(const pipeline::PipelineConfig& cfg) {
  // Block termination signals before any thread starts so a dedicated
  // waiter thread receives them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  const auto service = service::QueryService::load(cfg.service_config());
  service::HttpServer server(*service);
  const int port = server.bind(cfg.host, cfg.port);
  if (port < 0) {
    std::cerr << "error: cannot bind " << cfg.host << ":" << cfg.port << '\n';
    return kExitFailure;
  }
  std::cerr << "serving on http://" << cfg.host << ":" << port << '\n';

  std::thread waiter([&server, set] {
    int sig = 0;
    sigwait(&set, &sig);
    server.stop();
  });
  const bool ok = server.run();
  // run() also returns when the listener fails; wake the waiter either way.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identify and align set predicates in knowledge bases"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("-c,--config", o.config, "Pipeline config (JSON)")->required();
  app.add_option("--workdir", o.work_dir, "Artifact directory");
  app.add_option("--seed", o.seed, "Random seed");

  auto* ingest = app.add_subcommand("ingest", "Parse triples, materialize inverses, deduplicate");
  ingest->add_option("--input", o.input, "Triple dump");
  ingest->add_option("--format", o.format, "ntriples or tsv");
  ingest->add_option("--kb", o.kb, "KB tag (DBP-raw, DBP-map, WD-truthy, Freebase or a custom name)");
  ingest->add_flag("--inverse,!--no-inverse", o.inverse, "Materialize inverse triples");
  ingest->add_flag("--dedup,!--no-dedup", o.dedup, "Drop duplicate triples");

  auto* stats = app.add_subcommand("stats", "Per-predicate statistics for frequent predicates");
  stats->add_option("--min-count", o.min_count, "Frequency filter threshold");

  auto* profile = app.add_subcommand("profile", "Domain and range classes per predicate");
  profile->add_option("--class-map", o.class_map, "entity<TAB>class file");
  profile->add_option("--samples", o.samples, "Entities sampled per role");

  auto* features = app.add_subcommand("features", "Assemble classifier feature vectors");
  features->add_option("--freq-table", o.freq_table, "term<TAB>count frequency snapshot");
  features->add_option("--embeddings", o.embeddings, "Word vectors");
  features->add_option("--kind", o.kind, "enumerating, counting or both");

  auto* train = app.add_subcommand("train", "Train set-predicate classifiers from judgments");
  train->add_option("--model", o.model, "logistic, prior, lasso or neural");
  train->add_option("--labels", o.labels, "Class judgments (JSON Lines)");
  train->add_option("--kind", o.kind, "enumerating, counting or both");

  auto* classify_cmd = app.add_subcommand("classify", "Predict set predicates");
  classify_cmd->add_option("--model-file", o.model_files, "Trained model (repeatable)");
  classify_cmd->add_option("--id-filter", o.id_filter, "off, pre or post");
  classify_cmd->add_option("--kind", o.kind, "enumerating, counting or both");

  auto* align_cmd = app.add_subcommand("align", "Score and rank enumerating/counting pairs");
  align_cmd->add_option("--min-support", o.min_support, "Minimum shared subjects");
  align_cmd->add_option("--k", o.k, "Alignments kept per source");
  align_cmd->add_option("--direction", o.direction, "counting_to_enumerating, enumerating_to_counting or both");
  align_cmd->add_option("--combine", o.combine, "normalized or raw");
  align_cmd->add_option("--embeddings", o.embeddings, "Word vectors for cosine similarity");

  auto* evaluate = app.add_subcommand("evaluate", "NDCG of rankings, model selection, transfer grid");
  evaluate->add_option("--judgments", o.judgments, "Relevance judgments (JSON Lines)");
  evaluate->add_option("--ndcg-k", o.ndcg_k, "Comma-separated cutoffs, e.g. 1,3");
  evaluate->add_flag("--transfer", o.transfer, "Also train on each KB and test on the others");

  auto* export_cmd = app.add_subcommand("export-distribution", "CSV of (n_e, v_c) per co-occurring subject");
  export_cmd->add_option("--pair", o.pair, "<enumerating iri>,<counting iri>")->required();
  export_cmd->add_option("--output", o.output, "CSV path");

  auto* serve_cmd = app.add_subcommand("serve", "HTTP query service over the artifacts");
  serve_cmd->add_option("--host", o.host, "Listen address");
  serve_cmd->add_option("--port", o.port, "Listen port");
  serve_cmd->add_option("--workers", o.workers, "Worker threads");

  auto* run_cmd = app.add_subcommand("run", "ingest through align, then evaluate if judgments are configured");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const auto cfg = effective_config(o);
    if (*ingest) print(pipeline::run_ingest(cfg));
    else if (*stats) print(pipeline::run_stats(cfg));
    else if (*profile) print(pipeline::run_profile(cfg));
    else if (*features) print(pipeline::run_features(cfg));
    else if (*train) print(pipeline::run_train(cfg));
    else if (*classify_cmd) print(pipeline::run_classify(cfg));
    else if (*align_cmd) print(pipeline::run_align(cfg));
    else if (*evaluate) print(pipeline::run_evaluate(cfg, o.transfer));
    else if (*export_cmd) {
      const auto comma = o.pair.find(',');
      if (comma == std::string::npos) throw ConfigError("--pair expects <enumerating iri>,<counting iri>");
      const fs::path out = o.output ? fs::path(*o.output) : cfg.artifact("distribution.csv");
      print(pipeline::run_export_distribution(cfg, o.pair.substr(0, comma), o.pair.substr(comma + 1), out));
    } else if (*serve_cmd) {
      return serve(cfg);
    } else if (*run_cmd) {
      for (const auto& r : pipeline::run_all(cfg)) print(r);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const MissingArtifact& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMissing;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
