#include "counqer/classify/objectives.hpp"

namespace counqer::classify {

ObjectiveValue logistic_objective(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const GaussianPenalty& penalty) {
  const double b = theta[0];
  const auto w = theta.tail(theta.size() - 1);
  const Eigen::VectorXd z = (X * w).array() + b;
  const Eigen::VectorXd p = sigmoid(z.array()).matrix();

  ObjectiveValue out;
  for (Eigen::Index i = 0; i < z.size(); ++i) out.value += softplus(z[i]) - y[i] * z[i];
  out.value += 0.5 * (penalty.coef_precision * w.squaredNorm() + penalty.intercept_precision * b * b);

  const Eigen::VectorXd r = p - y;
  out.gradient.resize(theta.size());
  out.gradient[0] = r.sum() + penalty.intercept_precision * b;
  out.gradient.tail(w.size()) = X.transpose() * r + penalty.coef_precision * w;
  return out;
}

double lasso_objective(double intercept, const Eigen::VectorXd& weights, const Eigen::MatrixXd& X,
                       const Eigen::VectorXd& y, double lambda) {
  const Eigen::VectorXd z = (X * weights).array() + intercept;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) loss += softplus(z[i]) - y[i] * z[i];
  return loss / static_cast<double>(z.size()) + lambda * weights.lpNorm<1>();
}

NeuralParams NeuralParams::zeros(Eigen::Index hidden, Eigen::Index inputs) {
  NeuralParams p;
  p.hidden_weights = Eigen::MatrixXd::Zero(hidden, inputs);
  p.hidden_bias = Eigen::VectorXd::Zero(hidden);
  p.output_weights = Eigen::VectorXd::Zero(hidden);
  return p;
}

Eigen::VectorXd NeuralParams::flatten() const {
  Eigen::VectorXd flat(size());
  Eigen::Index k = 0;
  flat.segment(k, hidden_weights.size()) = hidden_weights.reshaped();
  k += hidden_weights.size();
  flat.segment(k, hidden_bias.size()) = hidden_bias;
  k += hidden_bias.size();
  flat.segment(k, output_weights.size()) = output_weights;
  k += output_weights.size();
  flat[k] = output_bias;
  return flat;
}

NeuralParams NeuralParams::unflatten(const Eigen::VectorXd& flat, Eigen::Index hidden, Eigen::Index inputs) {
  NeuralParams p = zeros(hidden, inputs);
  Eigen::Index k = 0;
  p.hidden_weights = flat.segment(k, hidden * inputs).reshaped(hidden, inputs);
  k += hidden * inputs;
  p.hidden_bias = flat.segment(k, hidden);
  k += hidden;
  p.output_weights = flat.segment(k, hidden);
  k += hidden;
  p.output_bias = flat[k];
  return p;
}

Eigen::VectorXd NeuralParams::forward(const Eigen::MatrixXd& X) const {
  const Eigen::MatrixXd pre = (X * hidden_weights.transpose()).rowwise() + hidden_bias.transpose();
  const Eigen::MatrixXd h = sigmoid(pre.array()).matrix();
  const Eigen::VectorXd z = (h * output_weights).array() + output_bias;
  return sigmoid(z.array()).matrix();
}

ObjectiveValue neural_objective(const NeuralParams& params, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const auto n = static_cast<double>(X.rows());
  const Eigen::MatrixXd pre = (X * params.hidden_weights.transpose()).rowwise() + params.hidden_bias.transpose();
  const Eigen::MatrixXd h = sigmoid(pre.array()).matrix();  // n x hidden
  const Eigen::VectorXd z = (h * params.output_weights).array() + params.output_bias;

  ObjectiveValue out;
  for (Eigen::Index i = 0; i < z.size(); ++i) out.value += softplus(z[i]) - y[i] * z[i];
  out.value /= n;

  // d loss / d z for sigmoid output with cross-entropy is (p - y).
  const Eigen::VectorXd dz = (sigmoid(z.array()).matrix() - y) / n;
  NeuralParams grad = NeuralParams::zeros(params.hidden_weights.rows(), params.hidden_weights.cols());
  grad.output_bias = dz.sum();
  grad.output_weights = h.transpose() * dz;
  const Eigen::MatrixXd dh = dz * params.output_weights.transpose();  // n x hidden
  const Eigen::MatrixXd dpre = (dh.array() * h.array() * (1.0 - h.array())).matrix();
  grad.hidden_bias = dpre.colwise().sum().transpose();
  grad.hidden_weights = dpre.transpose() * X;
  out.gradient = grad.flatten();
  return out;
}

}  // namespace counqer::classify
