#pragma once

#include "linklab/math.hpp"
#include "linklab/types.hpp"

#include <cstdint>
#include <optional>

namespace linklab {

/// input -> tanh hidden layer -> softmax.
template <typename Scalar>
struct MlpParams {
  Matrix<Scalar> w1;  // inputs x hidden
  Vector<Scalar> b1;  // hidden
  Matrix<Scalar> w2;  // hidden x classes
  Vector<Scalar> b2;  // classes

  Matrix<Scalar> predict_proba(const Matrix<Scalar>& X) const {
    Matrix<Scalar> h = X * w1;
    h.rowwise() += b1.transpose();
    h = h.array().tanh().matrix();
    Matrix<Scalar> logits = h * w2;
    logits.rowwise() += b2.transpose();
    return softmax_rows(logits);
  }

  bool operator==(const MlpParams& o) const {
    return same_matrix(w1, o.w1) && same_matrix(b1, o.b1) && same_matrix(w2, o.w2) && same_matrix(b2, o.b2);
  }
};

/// Mean cross-entropy + alpha * (||w1||^2 + ||w2||^2) / 2 on a batch. `keep_mask`
/// (batch x hidden, entries 0 or 1/(1-p)) applies inverted dropout to the hidden
/// activations. Writes gradients when `grad` is non-null.
template <typename Scalar>
Scalar mlp_objective(const MlpParams<Scalar>& p, const Matrix<Scalar>& X, const ClassCodes& y, Scalar alpha,
                     const Matrix<Scalar>* keep_mask = nullptr, MlpParams<Scalar>* grad = nullptr) {
  Matrix<Scalar> pre = X * p.w1;
  pre.rowwise() += p.b1.transpose();
  const Matrix<Scalar> act = pre.array().tanh().matrix();
  const Matrix<Scalar> hidden = keep_mask ? Matrix<Scalar>(act.cwiseProduct(*keep_mask)) : act;
  Matrix<Scalar> logits = hidden * p.w2;
  logits.rowwise() += p.b2.transpose();
  const Matrix<Scalar> proba = softmax_rows(logits);
  const Scalar loss =
      mean_cross_entropy(proba, y) + alpha * (p.w1.squaredNorm() + p.w2.squaredNorm()) / Scalar(2);
  if (grad) {
    const Scalar n = static_cast<Scalar>(X.rows());
    const Matrix<Scalar> d_logits = (proba - one_hot<Scalar>(y, static_cast<int>(p.b2.size()))) / n;
    grad->w2 = hidden.transpose() * d_logits + alpha * p.w2;
    grad->b2 = d_logits.colwise().sum().transpose();
    Matrix<Scalar> d_hidden = d_logits * p.w2.transpose();
    if (keep_mask) d_hidden = d_hidden.cwiseProduct(*keep_mask);
    const Matrix<Scalar> d_pre = d_hidden.cwiseProduct((Scalar(1) - act.array().square()).matrix());
    grad->w1 = X.transpose() * d_pre + alpha * p.w1;
    grad->b1 = d_pre.colwise().sum().transpose();
  }
  return loss;
}

struct MlpOptions {
  int hidden = 128;
  double alpha = 1e-4;
  double dropout = 0.5;
  int epochs = 25;
  double learning_rate = 1e-3;
  int batch_size = 32;
  std::uint64_t seed = 0;
};

/// Glorot-uniform initialisation.
MlpParams<double> init_mlp(int inputs, int hidden, int classes, std::uint64_t seed);

/// Mini-batch gradient descent with per-epoch shuffling. Throws
/// "training diverged at epoch N" when the loss or parameters stop being finite.
MlpParams<double> train_neural_network(const FeatureMatrix& X, const ClassCodes& y, int n_classes,
                                       const MlpOptions& options);

}  // namespace linklab
