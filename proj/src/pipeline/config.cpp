#include "counqer/pipeline/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "counqer/error.hpp"

namespace counqer::pipeline {

std::string_view id_filter_name(IdFilterMode m) {
  switch (m) {
    case IdFilterMode::Off: return "off";
    case IdFilterMode::Pre: return "pre";
    case IdFilterMode::Post: return "post";
  }
  return "post";
}

IdFilterMode parse_id_filter(std::string_view name) {
  if (name == "off") return IdFilterMode::Off;
  if (name == "pre") return IdFilterMode::Pre;
  if (name == "post") return IdFilterMode::Post;
  throw ConfigError("unknown id filter mode: " + std::string(name));
}

service::ServiceConfig PipelineConfig::service_config() const {
  service::ServiceConfig s;
  s.host = host;
  s.port = port;
  s.workers = workers;
  s.cors_origin = cors_origin;
  s.triples_path = artifact("triples.nt").string();
  s.stats_path = artifact("stats.jsonl").string();
  s.alignments_path = artifact("alignments.jsonl").string();
  s.kb = kb;
  s.k = k;
  s.min_support = min_support;
  s.combine = combine;
  s.aggregation = aggregation;
  return s;
}

namespace {

using nlohmann::json;

void check_keys(const json& section, std::string_view name, std::initializer_list<std::string_view> allowed) {
  if (!section.is_object()) throw ConfigError(std::string(name) + " must be an object");
  for (const auto& [key, _] : section.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown config key: " + std::string(name) + "." + key);
  }
}

template <typename T>
void read(const json& section, const char* key, T& out) {
  if (!section.contains(key)) return;
  try {
    out = section.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for config key ") + key);
  }
}

void read_path(const json& section, const char* key, const std::filesystem::path& base, std::filesystem::path& out) {
  std::string s;
  read(section, key, s);
  if (s.empty()) return;
  const std::filesystem::path p(s);
  out = p.is_absolute() ? p : base / p;
}

std::vector<align::Metric> read_metrics(const json& j) {
  std::vector<align::Metric> out;
  for (const auto& m : j) out.push_back(align::parse_metric(m.get<std::string>()));
  return out;
}

json metric_names(const std::vector<align::Metric>& ms) {
  json out = json::array();
  for (auto m : ms) out.push_back(std::string(align::metric_name(m)));
  return out;
}

}  // namespace

PipelineConfig config_from_json(const json& j, const std::filesystem::path& base) {
  PipelineConfig c;
  check_keys(j, "config",
             {"seed", "kb", "work_dir", "ingest", "stats", "profile", "features", "train", "classify", "align",
              "evaluate", "service"});
  read(j, "seed", c.seed);
  read(j, "kb", c.kb);
  c.work_dir = base / c.work_dir;
  read_path(j, "work_dir", base, c.work_dir);

  if (j.contains("ingest")) {
    const auto& s = j.at("ingest");
    check_keys(s, "ingest", {"input", "format", "inverse", "dedup", "date_heuristic"});
    read_path(s, "input", base, c.input);
    std::string fmt;
    read(s, "format", fmt);
    if (!fmt.empty()) {
      try {
        c.format = kb::parse_format(fmt);
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }
    read(s, "inverse", c.inverse);
    read(s, "dedup", c.dedup);
    read(s, "date_heuristic", c.date_heuristic);
  }
  if (j.contains("stats")) {
    check_keys(j.at("stats"), "stats", {"min_count"});
    read(j.at("stats"), "min_count", c.min_count);
  }
  if (j.contains("profile")) {
    const auto& s = j.at("profile");
    check_keys(s, "profile", {"class_map", "samples"});
    read_path(s, "class_map", base, c.class_map);
    read(s, "samples", c.samples);
  }
  if (j.contains("features")) {
    const auto& s = j.at("features");
    check_keys(s, "features", {"freq_table", "embeddings", "embedding_columns", "kinds"});
    read_path(s, "freq_table", base, c.freq_table);
    read_path(s, "embeddings", base, c.embeddings);
    read(s, "embedding_columns", c.embedding_columns);
    if (s.contains("kinds")) {
      c.feature_kinds.clear();
      for (const auto& k : s.at("kinds")) c.feature_kinds.push_back(parse_kind(k.get<std::string>()));
    }
  }
  if (j.contains("train")) {
    const auto& s = j.at("train");
    check_keys(s, "train", {"model", "labels"});
    std::string model;
    read(s, "model", model);
    if (!model.empty()) c.model = classify::parse_model_kind(model);
    read_path(s, "labels", base, c.class_judgments);
  }
  if (j.contains("classify")) {
    check_keys(j.at("classify"), "classify", {"id_filter"});
    std::string mode;
    read(j.at("classify"), "id_filter", mode);
    if (!mode.empty()) c.id_filter = parse_id_filter(mode);
  }
  if (j.contains("align")) {
    const auto& s = j.at("align");
    check_keys(s, "align", {"min_support", "k", "directions", "combine", "aggregation", "representatives"});
    read(s, "min_support", c.min_support);
    read(s, "k", c.k);
    if (s.contains("directions")) {
      c.directions.clear();
      for (const auto& d : s.at("directions")) c.directions.push_back(parse_direction(d.get<std::string>()));
    }
    std::string mode, agg;
    read(s, "combine", mode);
    if (!mode.empty()) c.combine.mode = align::parse_combine_mode(mode);
    read(s, "aggregation", agg);
    if (!agg.empty()) c.aggregation = align::parse_aggregation(agg);
    if (s.contains("representatives")) {
      const auto& r = s.at("representatives");
      check_keys(r, "align.representatives", {"counting_to_enumerating", "enumerating_to_counting"});
      if (r.contains("counting_to_enumerating")) {
        c.combine.counting_to_enumerating = read_metrics(r.at("counting_to_enumerating"));
      }
      if (r.contains("enumerating_to_counting")) {
        c.combine.enumerating_to_counting = read_metrics(r.at("enumerating_to_counting"));
      }
    }
  }
  if (j.contains("evaluate")) {
    const auto& s = j.at("evaluate");
    check_keys(s, "evaluate", {"judgments", "ndcg_k"});
    read_path(s, "judgments", base, c.relevance_judgments);
    read(s, "ndcg_k", c.ndcg_k);
  }
  if (j.contains("service")) {
    const auto& s = j.at("service");
    check_keys(s, "service", {"host", "port", "workers", "cors_origin"});
    read(s, "host", c.host);
    read(s, "port", c.port);
    read(s, "workers", c.workers);
    read(s, "cors_origin", c.cors_origin);
  }
  if (c.k == 0) throw ConfigError("align.k must be at least 1");
  for (auto k : c.ndcg_k) {
    if (k == 0) throw ConfigError("evaluate.ndcg_k values must be at least 1");
  }
  if (c.combine.counting_to_enumerating.empty() || c.combine.enumerating_to_counting.empty()) {
    throw ConfigError("align.representatives lists must not be empty");
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  try {
    return config_from_json(j, path.parent_path().empty() ? "." : path.parent_path());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

json to_json(const PipelineConfig& c) {
  json kinds = json::array();
  for (auto k : c.feature_kinds) kinds.push_back(std::string(kind_name(k)));
  json dirs = json::array();
  for (auto d : c.directions) dirs.push_back(std::string(direction_name(d)));
  return json{
      {"seed", c.seed},
      {"kb", c.kb},
      {"work_dir", c.work_dir.string()},
      {"ingest",
       {{"input", c.input.string()},
        {"format", c.format == kb::TripleFormat::Tsv ? "tsv" : "ntriples"},
        {"inverse", c.inverse},
        {"dedup", c.dedup},
        {"date_heuristic", c.date_heuristic}}},
      {"stats", {{"min_count", c.min_count}}},
      {"profile", {{"class_map", c.class_map.string()}, {"samples", c.samples}}},
      {"features",
       {{"freq_table", c.freq_table.string()},
        {"embeddings", c.embeddings.string()},
        {"embedding_columns", c.embedding_columns},
        {"kinds", kinds}}},
      {"train", {{"model", std::string(classify::model_kind_name(c.model))}, {"labels", c.class_judgments.string()}}},
      {"classify", {{"id_filter", std::string(id_filter_name(c.id_filter))}}},
      {"align",
       {{"min_support", c.min_support},
        {"k", c.k},
        {"directions", dirs},
        {"combine", std::string(align::combine_mode_name(c.combine.mode))},
        {"aggregation", std::string(align::aggregation_name(c.aggregation))},
        {"representatives",
         {{"counting_to_enumerating", metric_names(c.combine.counting_to_enumerating)},
          {"enumerating_to_counting", metric_names(c.combine.enumerating_to_counting)}}}}},
      {"evaluate", {{"judgments", c.relevance_judgments.string()}, {"ndcg_k", c.ndcg_k}}},
      {"service", {{"host", c.host}, {"port", c.port}, {"workers", c.workers}, {"cors_origin", c.cors_origin}}}};
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace counqer::pipeline
