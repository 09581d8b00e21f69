#include "linklab/logistic.hpp"

#include <algorithm>
#include <set>

namespace linklab {

namespace {

// Largest eigenvalue of [X 1]^T [X 1] / n by power iteration.
double gram_spectral_estimate(const FeatureMatrix& X) {
  const Eigen::Index d = X.cols() + 1;
  const double n = static_cast<double>(X.rows());
  FeatureVector v = FeatureVector::Ones(d) / std::sqrt(static_cast<double>(d));
  double lambda = 0.0;
  for (int it = 0; it < 30; ++it) {
    const FeatureVector xv = X * v.head(X.cols()) + FeatureVector::Constant(X.rows(), v[d - 1]);
    FeatureVector w(d);
    w.head(X.cols()) = X.transpose() * xv / n;
    w[d - 1] = xv.sum() / n;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    lambda = norm;
    v = w / norm;
  }
  return lambda;
}

}  // namespace

SoftmaxRegression<double> train_logistic_regression(const FeatureMatrix& X, const ClassCodes& y, int n_classes,
                                                    const LogisticOptions& options, LogisticTrace* trace) {
  if (options.C <= 0.0) throw Error("LR_c must be positive");
  if (static_cast<std::size_t>(X.rows()) != y.size() || y.empty()) throw Error("LR: bad training shapes");
  if (!all_finite(X)) throw Error("LR: non-finite features");
  if (std::set<int>(y.begin(), y.end()).size() < 2) throw Error("LR needs at least two classes");

  SoftmaxRegression<double> model{FeatureMatrix::Zero(X.cols(), n_classes), FeatureVector::Zero(n_classes)};
  FeatureMatrix gW;
  FeatureVector gb;
  double loss = logistic_objective(model, X, y, options.C, &gW, &gb);
  if (trace) trace->losses.push_back(loss);

  // Softmax cross-entropy curvature is bounded by half the data Gram spectrum.
  const double lipschitz = 0.5 * gram_spectral_estimate(X) + 1.0 / options.C;
  double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const double gnorm = std::max(gW.cwiseAbs().maxCoeff(), gb.cwiseAbs().maxCoeff());
    if (gnorm < options.gradient_tolerance) break;
    const double gsq = gW.squaredNorm() + gb.squaredNorm();
    SoftmaxRegression<double> candidate;
    double candidate_loss = loss;
    bool accepted = false;
    for (int backtrack = 0; backtrack < 40; ++backtrack) {
      candidate.weights = model.weights - step * gW;
      candidate.bias = model.bias - step * gb;
      candidate_loss = logistic_objective(candidate, X, y, options.C);
      if (candidate_loss <= loss - 0.5 * step * gsq) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    model = std::move(candidate);
    loss = logistic_objective(model, X, y, options.C, &gW, &gb);
    if (trace) trace->losses.push_back(loss);
    step *= 1.25;  // let the step recover after backtracking
  }
  if (trace) trace->iterations = it;
  return model;
}

}  // namespace linklab
