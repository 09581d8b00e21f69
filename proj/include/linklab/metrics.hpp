#pragma once

#include "linklab/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace linklab {

struct LabelScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // occurrences in y_true

  bool operator==(const LabelScore&) const = default;
};

struct F1Report {
  double weighted_f1 = 0.0;
  /// Every label seen in y_true or y_pred. Predicted-only labels carry support 0.
  std::map<std::string, LabelScore> per_label;
};

/// Per-label F1 weighted by true-label support. F1 is 0 when P + R = 0.
F1Report weighted_f1(const LabelList& y_true, const LabelList& y_pred);

struct ConfusionMatrix {
  LabelList labels;
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> counts;  // rows true, cols predicted

  long long total() const { return counts.sum(); }
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  bool operator==(const ConfusionMatrix& o) const {
    return labels == o.labels && counts.rows() == o.counts.rows() && counts.cols() == o.counts.cols() &&
           (counts.size() == 0 || counts == o.counts);
  }
};

/// Throws when a label is missing from `label_order`.
ConfusionMatrix confusion_matrix(const LabelList& y_true, const LabelList& y_pred, const LabelList& label_order);

}  // namespace linklab
