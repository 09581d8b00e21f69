#pragma once

#include "linklab/math.hpp"
#include "linklab/types.hpp"

#include <vector>

namespace linklab {

/// Multinomial softmax regression: logits = X W + 1 b^T.
template <typename Scalar>
struct SoftmaxRegression {
  Matrix<Scalar> weights;  // features x classes
  Vector<Scalar> bias;     // classes

  Matrix<Scalar> predict_proba(const Matrix<Scalar>& X) const {
    Matrix<Scalar> logits = X * weights;
    logits.rowwise() += bias.transpose();
    return softmax_rows(logits);
  }

  bool operator==(const SoftmaxRegression& o) const {
    return same_matrix(weights, o.weights) && same_matrix(bias, o.bias);
  }
};

/// Mean cross-entropy + ||W||^2 / (2C); the bias is not penalised. Gradients are
/// written when the output pointers are non-null.
template <typename Scalar>
Scalar logistic_objective(const SoftmaxRegression<Scalar>& model, const Matrix<Scalar>& X, const ClassCodes& y,
                          Scalar C, Matrix<Scalar>* grad_weights = nullptr, Vector<Scalar>* grad_bias = nullptr) {
  const Matrix<Scalar> proba = model.predict_proba(X);
  const Scalar loss = mean_cross_entropy(proba, y) + model.weights.squaredNorm() / (Scalar(2) * C);
  if (grad_weights || grad_bias) {
    const Scalar n = static_cast<Scalar>(X.rows());
    const Matrix<Scalar> residual = (proba - one_hot<Scalar>(y, static_cast<int>(model.bias.size()))) / n;
    if (grad_weights) *grad_weights = X.transpose() * residual + model.weights / C;
    if (grad_bias) *grad_bias = residual.colwise().sum().transpose();
  }
  return loss;
}

struct LogisticOptions {
  double C = 1.0;
  int max_iterations = 500;
  double gradient_tolerance = 1e-6;
};

struct LogisticTrace {
  std::vector<double> losses;  // objective after each accepted step, starting with the initial value
  int iterations = 0;
};

/// Full-batch gradient descent from zero weights with a backtracking step, so
/// the objective never increases. Stops at max_iterations or when the gradient
/// infinity norm drops below the tolerance.
SoftmaxRegression<double> train_logistic_regression(const FeatureMatrix& X, const ClassCodes& y, int n_classes,
                                                    const LogisticOptions& options, LogisticTrace* trace = nullptr);

}  // namespace linklab
