#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "counqer/classify/features.hpp"
#include "counqer/classify/objectives.hpp"

namespace counqer::classify {

enum class ModelKind { Logistic, Prior, Lasso, Neural };
std::string_view model_kind_name(ModelKind k);
ModelKind parse_model_kind(std::string_view name);

/// Ten log-spaced penalty values in [1e-3, 1e1].
std::vector<double> default_lambda_grid();

struct ModelSpec {
  ModelKind kind = ModelKind::Lasso;

  // logistic / prior (Newton with backtracking)
  int max_iterations = 500;
  double gradient_tolerance = 1e-6;
  double prior_scale = 2.5;
  double intercept_prior_scale = 10.0;

  // lasso: fixed penalty, or chosen by leave-one-out F1 over the grid
  std::optional<double> lambda;
  std::vector<double> lambda_grid = default_lambda_grid();

  // neural
  int hidden_units = 3;
  double learning_rate = 0.5;
  int epochs = 5000;
  double init_range = 0.5;

  static ModelSpec of(ModelKind kind) {
    ModelSpec s;
    s.kind = kind;
    return s;
  }
};

/// Per-column z-scoring fitted on training data. Constant columns keep a
/// unit scale.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& X);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

struct TrainedModel {
  ModelKind kind = ModelKind::Logistic;
  SetKind feature_kind = SetKind::Enumerating;
  std::vector<std::string> feature_names;
  Standardizer standardizer;

  // Linear models, on standardized inputs.
  Eigen::VectorXd weights;
  double intercept = 0.0;

  // Neural model, on standardized inputs.
  NeuralParams network;

  double lambda = 0.0;
  double prior_scale = 0.0;
  double intercept_prior_scale = 0.0;
  double threshold = 0.5;
  int iterations = 0;
  bool converged = false;

  /// Probability for a raw (unstandardized) feature row.
  double probability(const Eigen::VectorXd& raw) const;
};

struct Prediction {
  double probability = 0.0;
  bool label = false;
};

/// Fits a model. Linear kinds need both classes ("degenerate labels"
/// otherwise); all kinds need at least two examples.
TrainedModel train(std::span<const LabeledExample> examples, const ModelSpec& spec, std::uint64_t seed);

/// Throws on feature-kind or dimension mismatch.
Prediction predict(const TrainedModel& model, const FeatureVector& features);

nlohmann::json to_json(const TrainedModel& m);
TrainedModel model_from_json(const nlohmann::json& j);

}  // namespace counqer::classify
