#include "counqer/classify/model.hpp"

#include <algorithm>
#include <cmath>

#include "counqer/classify/evaluation.hpp"
#include "counqer/error.hpp"
#include "counqer/random.hpp"

namespace counqer::classify {

namespace {

constexpr double kMinScale = 1e-12;

struct LinearFit {
  double intercept = 0.0;
  Eigen::VectorXd weights;
  int iterations = 0;
  bool converged = false;
};

/// Newton's method with backtracking on the penalized negative log-likelihood.
LinearFit fit_newton(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const GaussianPenalty& penalty,
                     const ModelSpec& spec) {
  const Eigen::Index d = X.cols();
  Eigen::MatrixXd Xa(X.rows(), d + 1);
  Xa.col(0).setOnes();
  Xa.rightCols(d) = X;
  Eigen::VectorXd precision(d + 1);
  precision[0] = penalty.intercept_precision;
  precision.tail(d).setConstant(penalty.coef_precision);

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d + 1);
  LinearFit fit;
  auto current = logistic_objective(theta, X, y, penalty);
  for (int it = 0; it < spec.max_iterations; ++it) {
    fit.iterations = it;
    if (current.gradient.lpNorm<Eigen::Infinity>() < spec.gradient_tolerance) {
      fit.converged = true;
      break;
    }
    const Eigen::VectorXd p = sigmoid(((X * theta.tail(d)).array() + theta[0])).matrix();
    const Eigen::VectorXd w = (p.array() * (1.0 - p.array())).matrix();
    Eigen::MatrixXd H = Xa.transpose() * w.asDiagonal() * Xa;
    H.diagonal() += precision;
    // Separable data drives the curvature to zero; a tiny ridge keeps the
    // system solvable and the line search controls the step.
    H.diagonal().array() += 1e-8;
    const Eigen::VectorXd step = H.ldlt().solve(current.gradient);

    const double slope = current.gradient.dot(step);
    double t = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
      Eigen::VectorXd candidate = theta - t * step;
      auto next = logistic_objective(candidate, X, y, penalty);
      if (std::isfinite(next.value) && next.value <= current.value - 1e-4 * t * slope) {
        theta = std::move(candidate);
        current = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no further decrease at machine precision
    fit.iterations = it + 1;
  }
  if (current.gradient.lpNorm<Eigen::Infinity>() < spec.gradient_tolerance) fit.converged = true;
  fit.intercept = theta[0];
  fit.weights = theta.tail(d);
  return fit;
}

double soft_threshold(double x, double lambda) {
  if (x > lambda) return x - lambda;
  if (x < -lambda) return x + lambda;
  return 0.0;
}

/// Proximal Newton for L1-penalized logistic regression: each outer step
/// forms the weighted least-squares approximation of the log loss and solves
/// its L1 problem by cyclic coordinate-wise soft-thresholding, then takes a
/// backtracked step toward that solution.
LinearFit fit_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, const ModelSpec& spec,
                    const LinearFit* warm = nullptr) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  const double inv_n = 1.0 / static_cast<double>(n);

  LinearFit fit;
  if (warm) {
    fit.weights = warm->weights;
    fit.intercept = warm->intercept;
  } else {
    fit.weights = Eigen::VectorXd::Zero(d);
    const double ybar = std::clamp(y.mean(), 1e-6, 1.0 - 1e-6);
    fit.intercept = std::log(ybar / (1.0 - ybar));
  }
  double objective = lasso_objective(fit.intercept, fit.weights, X, y, lambda);

  for (int outer = 0; outer < spec.max_iterations; ++outer) {
    fit.iterations = outer + 1;
    const Eigen::VectorXd z = (X * fit.weights).array() + fit.intercept;
    const Eigen::VectorXd p = sigmoid(z.array()).matrix();
    const Eigen::VectorXd w = (p.array() * (1.0 - p.array())).max(1e-5).matrix();
    // Residual of the working response z + (y - p)/w against the current fit.
    Eigen::VectorXd res = ((y - p).array() / w.array()).matrix();

    double b = fit.intercept;
    Eigen::VectorXd beta = fit.weights;
    const double w_sum = w.sum();
    Eigen::VectorXd curvature(d);
    for (Eigen::Index j = 0; j < d; ++j) curvature[j] = inv_n * w.dot(X.col(j).cwiseAbs2());

    for (int sweep = 0; sweep < 200; ++sweep) {
      double max_change = 0.0;
      const double db = w.dot(res) / w_sum;
      b += db;
      res.array() -= db;
      max_change = std::abs(db);
      for (Eigen::Index j = 0; j < d; ++j) {
        if (curvature[j] <= 0.0) continue;
        const double g = inv_n * (w.array() * X.col(j).array() * res.array()).sum() + curvature[j] * beta[j];
        const double updated = soft_threshold(g, lambda) / curvature[j];
        const double delta = updated - beta[j];
        if (delta != 0.0) {
          res -= delta * X.col(j);
          beta[j] = updated;
          max_change = std::max(max_change, std::abs(delta));
        }
      }
      if (max_change < 1e-8) break;
    }

    // Backtrack along the direction to the subproblem solution.
    const double db = b - fit.intercept;
    const Eigen::VectorXd dbeta = beta - fit.weights;
    double t = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings < 50; ++halvings, t *= 0.5) {
      const double cand_b = fit.intercept + t * db;
      Eigen::VectorXd cand_w = fit.weights + t * dbeta;
      // Keep exact zeros exact after a partial step.
      for (Eigen::Index j = 0; j < d; ++j) {
        if (beta[j] == 0.0 && t < 1.0 && std::abs(cand_w[j]) < 1e-15) cand_w[j] = 0.0;
      }
      const double value = lasso_objective(cand_b, cand_w, X, y, lambda);
      if (value <= objective + 1e-12) {
        const double change = t * std::max(std::abs(db), dbeta.lpNorm<Eigen::Infinity>());
        fit.intercept = cand_b;
        fit.weights = std::move(cand_w);
        accepted = true;
        const bool done = change < 1e-9 || objective - value < 1e-13;
        objective = value;
        if (done) {
          fit.converged = true;
          return fit;
        }
        break;
      }
    }
    if (!accepted) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

NeuralParams fit_neural(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const ModelSpec& spec,
                        std::uint64_t seed, int& epochs_run) {
  Rng rng(seed);
  NeuralParams params = NeuralParams::zeros(spec.hidden_units, X.cols());
  Eigen::VectorXd flat = params.flatten();
  for (Eigen::Index i = 0; i < flat.size(); ++i) flat[i] = rng.uniform(-spec.init_range, spec.init_range);
  params = NeuralParams::unflatten(flat, spec.hidden_units, X.cols());

  epochs_run = 0;
  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    auto obj = neural_objective(params, X, y);
    epochs_run = epoch + 1;
    if (obj.gradient.lpNorm<Eigen::Infinity>() < spec.gradient_tolerance) break;
    flat -= spec.learning_rate * obj.gradient;
    params = NeuralParams::unflatten(flat, spec.hidden_units, X.cols());
  }
  return params;
}

/// Leave-one-out F1 for every grid penalty. Each fold walks the grid from
/// the largest penalty down, warm-starting from the previous solution.
/// Single-class folds predict negative, as in loo_cv.
std::vector<double> lasso_grid_f1(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const std::vector<double>& grid,
                                  const ModelSpec& spec) {
  const Eigen::Index n = X.rows();
  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid[a] > grid[b]; });

  std::vector<std::vector<bool>> predictions(grid.size(), std::vector<bool>(static_cast<std::size_t>(n), false));
  std::vector<bool> labels(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = y[i] > 0.5;

  Eigen::MatrixXd Xf(n - 1, X.cols());
  Eigen::VectorXd yf(n - 1);
  for (Eigen::Index held = 0; held < n; ++held) {
    for (Eigen::Index i = 0, r = 0; i < n; ++i) {
      if (i == held) continue;
      Xf.row(r) = X.row(i);
      yf[r++] = y[i];
    }
    const double positives = yf.sum();
    if (positives == 0.0 || positives == static_cast<double>(yf.size())) continue;
    const auto standardizer = Standardizer::fit(Xf);
    const Eigen::MatrixXd Z = standardizer.apply(Xf);
    const Eigen::VectorXd z_held = standardizer.apply(Eigen::VectorXd(X.row(held).transpose()));
    LinearFit previous;
    bool have_previous = false;
    for (std::size_t g : order) {
      previous = fit_lasso(Z, yf, grid[g], spec, have_previous ? &previous : nullptr);
      have_previous = true;
      const double p = 1.0 / (1.0 + std::exp(-(previous.weights.dot(z_held) + previous.intercept)));
      predictions[g][static_cast<std::size_t>(held)] = p >= 0.5;
    }
  }
  std::vector<double> f1(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) f1[g] = eval::prf1(predictions[g], labels).f1;
  return f1;
}

TrainedModel fit_with_lambda(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, double lambda,
                             const ModelSpec& spec, TrainedModel model) {
  auto fit = fit_lasso(Z, y, lambda, spec);
  model.weights = fit.weights;
  model.intercept = fit.intercept;
  model.lambda = lambda;
  model.iterations = fit.iterations;
  model.converged = fit.converged;
  return model;
}

}  // namespace

std::string_view model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Logistic: return "logistic";
    case ModelKind::Prior: return "prior";
    case ModelKind::Lasso: return "lasso";
    case ModelKind::Neural: return "neural";
  }
  return "logistic";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "logistic") return ModelKind::Logistic;
  if (name == "prior") return ModelKind::Prior;
  if (name == "lasso") return ModelKind::Lasso;
  if (name == "neural") return ModelKind::Neural;
  throw ConfigError("unknown model kind: " + std::string(name));
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int k = 0; k < 10; ++k) grid.push_back(std::pow(10.0, -3.0 + 4.0 * k / 9.0));
  return grid;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& X) {
  Standardizer s;
  s.mean = X.colwise().mean().transpose();
  s.scale.resize(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double var = (X.col(j).array() - s.mean[j]).square().mean();
    const double sd = std::sqrt(var);
    s.scale[j] = sd < kMinScale ? 1.0 : sd;
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& X) const {
  return ((X.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array()).matrix();
}

Eigen::VectorXd Standardizer::apply(const Eigen::VectorXd& x) const {
  return ((x - mean).array() / scale.array()).matrix();
}

double TrainedModel::probability(const Eigen::VectorXd& raw) const {
  const Eigen::VectorXd z = standardizer.apply(raw);
  if (kind == ModelKind::Neural) {
    Eigen::MatrixXd row = z.transpose();
    return network.forward(row)[0];
  }
  return sigmoid(weights.dot(z) + intercept);
}

TrainedModel train(std::span<const LabeledExample> examples, const ModelSpec& spec, std::uint64_t seed) {
  if (examples.size() < 2) throw Error("training needs at least two examples");
  const SetKind kind = examples.front().features.kind;
  for (const auto& e : examples) {
    if (e.features.kind != kind) throw Error("training examples mix feature kinds");
  }
  const Eigen::MatrixXd X = design_matrix(examples);
  const Eigen::VectorXd y = label_vector(examples);
  const double positives = y.sum();
  const bool single_class = positives == 0.0 || positives == static_cast<double>(y.size());
  if (single_class && spec.kind != ModelKind::Neural) throw Error("degenerate labels");

  TrainedModel model;
  model.kind = spec.kind;
  model.feature_kind = kind;
  model.feature_names = examples.front().features.names;
  model.standardizer = Standardizer::fit(X);
  const Eigen::MatrixXd Z = model.standardizer.apply(X);

  switch (spec.kind) {
    case ModelKind::Logistic:
    case ModelKind::Prior: {
      const auto penalty = spec.kind == ModelKind::Prior
                               ? GaussianPenalty::scales(spec.prior_scale, spec.intercept_prior_scale)
                               : GaussianPenalty::none();
      auto fit = fit_newton(Z, y, penalty, spec);
      model.weights = fit.weights;
      model.intercept = fit.intercept;
      model.iterations = fit.iterations;
      model.converged = fit.converged;
      if (spec.kind == ModelKind::Prior) {
        model.prior_scale = spec.prior_scale;
        model.intercept_prior_scale = spec.intercept_prior_scale;
      }
      break;
    }
    case ModelKind::Lasso: {
      double lambda = 0.0;
      if (spec.lambda) {
        lambda = *spec.lambda;
      } else if (examples.size() < 3 || spec.lambda_grid.empty()) {
        lambda = spec.lambda_grid.empty() ? 0.1 : spec.lambda_grid[spec.lambda_grid.size() / 2];
      } else {
        // Inner leave-one-out F1 per grid point; ties go to the larger penalty.
        const auto scores = lasso_grid_f1(X, y, spec.lambda_grid, spec);
        double best_f1 = -1.0;
        for (std::size_t g = 0; g < scores.size(); ++g) {
          const double candidate = spec.lambda_grid[g];
          const double f1 = scores[g];
          if (f1 > best_f1 || (f1 == best_f1 && candidate > lambda)) {
            best_f1 = f1;
            lambda = candidate;
          }
        }
      }
      model = fit_with_lambda(Z, y, lambda, spec, std::move(model));
      break;
    }
    case ModelKind::Neural: {
      int epochs = 0;
      model.network = fit_neural(Z, y, spec, seed, epochs);
      model.iterations = epochs;
      model.converged = epochs < spec.epochs;
      break;
    }
  }
  return model;
}

Prediction predict(const TrainedModel& model, const FeatureVector& features) {
  if (features.kind != model.feature_kind) throw Error("predict: feature kind does not match the model");
  if (features.values.size() != model.standardizer.mean.size()) {
    throw Error("predict: expected " + std::to_string(model.standardizer.mean.size()) + " features, got " +
                std::to_string(features.values.size()));
  }
  Prediction p;
  p.probability = model.probability(features.values);
  p.label = p.probability >= model.threshold;
  return p;
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_std(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

nlohmann::json to_json(const TrainedModel& m) {
  nlohmann::json j;
  j["kind"] = std::string(model_kind_name(m.kind));
  j["feature_kind"] = std::string(kind_name(m.feature_kind));
  j["feature_names"] = m.feature_names;
  j["standardization"] = {{"mean", to_std(m.standardizer.mean)}, {"scale", to_std(m.standardizer.scale)}};
  j["hyperparameters"] = {{"lambda", m.lambda},
                          {"prior_scale", m.prior_scale},
                          {"intercept_prior_scale", m.intercept_prior_scale}};
  j["threshold"] = m.threshold;
  j["iterations"] = m.iterations;
  j["converged"] = m.converged;
  if (m.kind == ModelKind::Neural) {
    const auto h = m.network.hidden_weights.rows();
    nlohmann::json hidden = nlohmann::json::array();
    for (Eigen::Index r = 0; r < h; ++r) hidden.push_back(to_std(m.network.hidden_weights.row(r).transpose()));
    j["network"] = {{"hidden_weights", hidden},
                    {"hidden_bias", to_std(m.network.hidden_bias)},
                    {"output_weights", to_std(m.network.output_weights)},
                    {"output_bias", m.network.output_bias}};
  } else {
    nlohmann::json weights = nlohmann::json::array();
    for (std::size_t i = 0; i < m.feature_names.size(); ++i) {
      weights.push_back({{"name", m.feature_names[i]}, {"value", m.weights[static_cast<Eigen::Index>(i)]}});
    }
    j["weights"] = weights;
    j["intercept"] = m.intercept;
  }
  return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
  TrainedModel m;
  m.kind = parse_model_kind(j.at("kind").get<std::string>());
  m.feature_kind = parse_kind(j.at("feature_kind").get<std::string>());
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  m.standardizer.mean = from_std(j.at("standardization").at("mean").get<std::vector<double>>());
  m.standardizer.scale = from_std(j.at("standardization").at("scale").get<std::vector<double>>());
  const auto& hp = j.at("hyperparameters");
  m.lambda = hp.at("lambda").get<double>();
  m.prior_scale = hp.at("prior_scale").get<double>();
  m.intercept_prior_scale = hp.at("intercept_prior_scale").get<double>();
  m.threshold = j.value("threshold", 0.5);
  m.iterations = j.value("iterations", 0);
  m.converged = j.value("converged", false);
  const auto d = static_cast<Eigen::Index>(m.feature_names.size());
  if (m.standardizer.mean.size() != d || m.standardizer.scale.size() != d) {
    throw Error("model standardization does not match its feature names");
  }
  if (m.kind == ModelKind::Neural) {
    const auto& net = j.at("network");
    const auto& hidden = net.at("hidden_weights");
    const auto h = static_cast<Eigen::Index>(hidden.size());
    m.network = NeuralParams::zeros(h, d);
    for (Eigen::Index r = 0; r < h; ++r) {
      m.network.hidden_weights.row(r) = from_std(hidden[static_cast<std::size_t>(r)].get<std::vector<double>>()).transpose();
    }
    m.network.hidden_bias = from_std(net.at("hidden_bias").get<std::vector<double>>());
    m.network.output_weights = from_std(net.at("output_weights").get<std::vector<double>>());
    m.network.output_bias = net.at("output_bias").get<double>();
  } else {
    m.weights.resize(d);
    const auto& weights = j.at("weights");
    if (static_cast<Eigen::Index>(weights.size()) != d) throw Error("model weights do not match its feature names");
    for (Eigen::Index i = 0; i < d; ++i) m.weights[i] = weights[static_cast<std::size_t>(i)].at("value").get<double>();
    m.intercept = j.at("intercept").get<double>();
  }
  return m;
}

}  // namespace counqer::classify
