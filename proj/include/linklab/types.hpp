#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace linklab {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// Feature matrices hold one sample per row.
using FeatureMatrix = Matrix<double>;
using FeatureVector = Vector<double>;

/// Integer class codes into an ordered label set.
using ClassCodes = std::vector<int>;
using LabelList = std::vector<std::string>;

/// Base error for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input (flags, configuration, malformed requests).
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace linklab
