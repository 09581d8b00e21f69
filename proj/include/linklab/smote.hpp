#pragma once

#include "linklab/types.hpp"

#include <cstdint>
#include <vector>

namespace linklab {

/// Where a synthetic row came from: x + gap * (x_neighbor - x).
struct SyntheticOrigin {
  Eigen::Index source = 0;
  Eigen::Index neighbor = 0;
  double gap = 0.0;
};

struct SmoteResult {
  FeatureMatrix X;
  ClassCodes y;
  /// One entry per synthetic row; synthetic rows follow the original rows.
  std::vector<SyntheticOrigin> origins;
};

/// Oversamples every class up to the majority count. Neighbours are the k
/// nearest same-class rows by Euclidean distance (k clamped to class size - 1);
/// a singleton class is duplicated. Deterministic for a given seed.
SmoteResult smote_oversample(const FeatureMatrix& X, const ClassCodes& y, int k, std::uint64_t seed);

}  // namespace linklab
