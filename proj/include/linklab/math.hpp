#pragma once

#include "linklab/types.hpp"

#include <cmath>

namespace linklab {

/// Row-wise softmax of a logits matrix, stabilised by the row maximum.
template <typename Derived>
Matrix<typename Derived::Scalar> softmax_rows(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> out = logits;
  out.colwise() -= out.rowwise().maxCoeff();
  out = out.array().exp().matrix();
  out.array().colwise() /= out.rowwise().sum().array();
  return out;
}

/// Mean cross-entropy of row-stochastic probabilities against class codes.
template <typename Derived>
typename Derived::Scalar mean_cross_entropy(const Eigen::MatrixBase<Derived>& proba, const ClassCodes& y) {
  using Scalar = typename Derived::Scalar;
  Scalar total{0};
  for (Eigen::Index i = 0; i < proba.rows(); ++i) {
    total -= std::log(std::max(proba(i, y[static_cast<std::size_t>(i)]), Scalar(1e-300)));
  }
  return total / static_cast<Scalar>(proba.rows());
}

/// One-hot targets, rows x n_classes.
template <typename Scalar>
Matrix<Scalar> one_hot(const ClassCodes& y, int n_classes) {
  Matrix<Scalar> t = Matrix<Scalar>::Zero(static_cast<Eigen::Index>(y.size()), n_classes);
  for (std::size_t i = 0; i < y.size(); ++i) t(static_cast<Eigen::Index>(i), y[i]) = Scalar(1);
  return t;
}

/// Index of the row maximum; the first maximum wins ties.
template <typename Derived>
int argmax_row(const Eigen::MatrixBase<Derived>& row) {
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < row.size(); ++j) {
    if (row(j) > row(best)) best = j;
  }
  return static_cast<int>(best);
}

/// Exact equality that tolerates differing shapes (Eigen's operator== asserts on them).
template <typename A, typename B>
bool same_matrix(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.array().isFinite().all();
}

/// SplitMix64 step, used to derive independent seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace linklab
