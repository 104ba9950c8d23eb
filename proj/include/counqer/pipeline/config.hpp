#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "counqer/align/alignment.hpp"
#include "counqer/classify/model.hpp"
#include "counqer/kb/parser.hpp"
#include "counqer/service/query_service.hpp"

namespace counqer::pipeline {

enum class IdFilterMode { Off, Pre, Post };
std::string_view id_filter_name(IdFilterMode m);
IdFilterMode parse_id_filter(std::string_view name);

/// Effective run configuration. Loaded from a JSON file; relative paths are
/// resolved against the file's directory. Command-line flags override
/// individual fields afterwards.
struct PipelineConfig {
  std::uint64_t seed = 7;
  std::string kb = "custom";
  std::filesystem::path work_dir = "run";

  // ingest
  std::filesystem::path input;
  kb::TripleFormat format = kb::TripleFormat::NTriples;
  bool inverse = true;
  bool dedup = true;
  bool date_heuristic = true;

  // stats
  std::size_t min_count = 50;

  // profile
  std::filesystem::path class_map;
  std::size_t samples = 100;

  // features
  std::filesystem::path freq_table;
  std::filesystem::path embeddings;
  bool embedding_columns = false;
  std::vector<SetKind> feature_kinds{SetKind::Enumerating, SetKind::Counting};

  // train
  classify::ModelKind model = classify::ModelKind::Lasso;
  std::filesystem::path class_judgments;

  // classify; empty model_files means model_<kind>.json in the work dir
  IdFilterMode id_filter = IdFilterMode::Post;
  std::vector<std::filesystem::path> model_files;

  // align
  std::size_t min_support = 50;
  std::size_t k = 3;
  std::vector<Direction> directions{Direction::CountingToEnumerating, Direction::EnumeratingToCounting};
  align::CombineConfig combine;
  align::ValueAggregation aggregation = align::ValueAggregation::Max;

  // evaluate
  std::filesystem::path relevance_judgments;
  std::vector<std::size_t> ndcg_k{1, 3};

  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t workers = 4;
  std::string cors_origin = "*";

  std::filesystem::path artifact(std::string_view name) const { return work_dir / name; }
  classify::ModelSpec model_spec() const { return classify::ModelSpec::of(model); }
  service::ServiceConfig service_config() const;
};

/// Throws ConfigError on unreadable files, malformed JSON, unknown keys and
/// bad values.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
nlohmann::json to_json(const PipelineConfig& c);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view data);

}  // namespace counqer::pipeline
