#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace counqer::classify {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Elementwise logistic function over an Eigen expression.
template <typename Derived>
auto sigmoid(const Eigen::ArrayBase<Derived>& z) {
  return (1.0 + (-z).exp()).inverse();
}

/// log(1 + exp(z)) without overflow.
inline double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

struct ObjectiveValue {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// Gaussian prior on a linear model, as inverse variances. Zero means no
/// penalty (plain maximum likelihood).
struct GaussianPenalty {
  double coef_precision = 0.0;
  double intercept_precision = 0.0;

  static GaussianPenalty none() { return {}; }
  static GaussianPenalty scales(double coef_scale, double intercept_scale) {
    return {1.0 / (coef_scale * coef_scale), 1.0 / (intercept_scale * intercept_scale)};
  }
};

/// Negative log-likelihood of a logistic model plus the Gaussian penalty.
/// theta = [intercept, weights...]; X is n x d, y in {0, 1}.
ObjectiveValue logistic_objective(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const GaussianPenalty& penalty);

/// Mean log loss plus lambda * |weights|_1 (intercept unpenalized).
double lasso_objective(double intercept, const Eigen::VectorXd& weights, const Eigen::MatrixXd& X,
                       const Eigen::VectorXd& y, double lambda);

/// One-hidden-layer sigmoid network.
struct NeuralParams {
  Eigen::MatrixXd hidden_weights;  // h x d
  Eigen::VectorXd hidden_bias;     // h
  Eigen::VectorXd output_weights;  // h
  double output_bias = 0.0;

  static NeuralParams zeros(Eigen::Index hidden, Eigen::Index inputs);
  Eigen::Index size() const { return hidden_weights.size() + hidden_bias.size() + output_weights.size() + 1; }

  /// Flat layout: hidden_weights (column-major), hidden_bias, output_weights, output_bias.
  Eigen::VectorXd flatten() const;
  static NeuralParams unflatten(const Eigen::VectorXd& flat, Eigen::Index hidden, Eigen::Index inputs);

  /// Output probability for each row of X.
  Eigen::VectorXd forward(const Eigen::MatrixXd& X) const;
};

/// Mean cross-entropy of the network and its gradient in the flat layout.
ObjectiveValue neural_objective(const NeuralParams& params, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

}  // namespace counqer::classify
