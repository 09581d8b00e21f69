#include "linklab/neural_net.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace linklab {

MlpParams<double> init_mlp(int inputs, int hidden, int classes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto glorot = [&](int fan_in, int fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    FeatureMatrix m(fan_in, fan_out);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
    return m;
  };
  MlpParams<double> p;
  p.w1 = glorot(inputs, hidden);
  p.b1 = FeatureVector::Zero(hidden);
  p.w2 = glorot(hidden, classes);
  p.b2 = FeatureVector::Zero(classes);
  return p;
}

MlpParams<double> train_neural_network(const FeatureMatrix& X, const ClassCodes& y, int n_classes,
                                       const MlpOptions& options) {
  if (options.epochs < 1) throw Error("NN_e must be at least 1");
  if (options.dropout < 0.0 || options.dropout >= 1.0) throw Error("NN_dp must lie in [0, 1)");
  if (options.learning_rate <= 0.0) throw Error("NN_lr must be positive");
  if (static_cast<std::size_t>(X.rows()) != y.size() || y.empty()) throw Error("NN: bad training shapes");
  if (!all_finite(X)) throw Error("NN: non-finite features");

  MlpParams<double> params = init_mlp(static_cast<int>(X.cols()), options.hidden, n_classes, options.seed);
  std::mt19937_64 rng(mix_seed(options.seed, 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double keep_scale = 1.0 / (1.0 - options.dropout);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(X.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  MlpParams<double> grad;

  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(options.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(options.batch_size));
      const auto rows = static_cast<Eigen::Index>(end - start);
      FeatureMatrix batch(rows, X.cols());
      ClassCodes batch_y(end - start);
      for (std::size_t i = start; i < end; ++i) {
        batch.row(static_cast<Eigen::Index>(i - start)) = X.row(order[i]);
        batch_y[i - start] = y[static_cast<std::size_t>(order[i])];
      }
      FeatureMatrix mask;
      const FeatureMatrix* mask_ptr = nullptr;
      if (options.dropout > 0.0) {
        mask.resize(rows, options.hidden);
        for (Eigen::Index i = 0; i < mask.size(); ++i) {
          mask.data()[i] = unit(rng) < options.dropout ? 0.0 : keep_scale;
        }
        mask_ptr = &mask;
      }
      const double loss = mlp_objective(params, batch, batch_y, options.alpha, mask_ptr, &grad);
      if (!std::isfinite(loss)) throw Error("training diverged at epoch " + std::to_string(epoch));
      params.w1 -= options.learning_rate * grad.w1;
      params.b1 -= options.learning_rate * grad.b1;
      params.w2 -= options.learning_rate * grad.w2;
      params.b2 -= options.learning_rate * grad.b2;
    }
    if (!all_finite(params.w1) || !all_finite(params.w2) || !all_finite(params.b1) || !all_finite(params.b2)) {
      throw Error("training diverged at epoch " + std::to_string(epoch));
    }
  }
  return params;
}

}  // namespace linklab
