#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "counqer/pipeline/config.hpp"

namespace counqer::pipeline {

/// What a stage read and wrote, plus a small summary for the console.
struct StageReport {
  std::string stage;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  nlohmann::json summary = nlohmann::json::object();
};

// Each stage reads the artifacts of earlier stages from the work directory
// and throws MissingArtifact naming the stage that should have produced a
// missing file. Every stage writes manifest_<stage>.json next to its outputs.

StageReport run_ingest(const PipelineConfig& cfg);    // triples.nt, errors.log, catalog.jsonl
StageReport run_stats(const PipelineConfig& cfg);     // stats.jsonl
StageReport run_profile(const PipelineConfig& cfg);   // profiles.jsonl
StageReport run_features(const PipelineConfig& cfg);  // features_<kind>.jsonl
StageReport run_train(const PipelineConfig& cfg);     // training_<kind>.jsonl, model_<kind>.json
StageReport run_classify(const PipelineConfig& cfg);  // classification.jsonl
StageReport run_align(const PipelineConfig& cfg);     // alignments.jsonl, rankings.jsonl

/// NDCG report over relevance judgments (evaluation.json, evaluation.txt)
/// and a model-selection table from the training sets (model_selection.json).
/// With `transfer`, also the cross-KB grid (transfer.json, transfer.txt).
StageReport run_evaluate(const PipelineConfig& cfg, bool transfer);

/// Writes the value distribution of one aligned pair as CSV.
StageReport run_export_distribution(const PipelineConfig& cfg, const std::string& e_iri, const std::string& c_iri,
                                    const std::filesystem::path& output);

/// ingest through align, then evaluate when relevance judgments are configured.
std::vector<StageReport> run_all(const PipelineConfig& cfg);

/// Writes manifest_<stage>.json: inputs and outputs with content hashes,
/// config hash, seed, versions and a UTC timestamp.
void write_manifest(const PipelineConfig& cfg, const StageReport& report);

}  // namespace counqer::pipeline
