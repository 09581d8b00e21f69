#include "linklab/metrics.hpp"

#include <algorithm>
#include <unordered_map>

namespace linklab {

F1Report weighted_f1(const LabelList& y_true, const LabelList& y_pred) {
  if (y_true.size() != y_pred.size()) throw Error("weighted_f1: y_true and y_pred differ in length");
  if (y_true.empty()) throw Error("weighted_f1: empty input");
  struct Tally {
    std::size_t tp = 0, predicted = 0, actual = 0;
  };
  std::map<std::string, Tally> tally;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ++tally[y_true[i]].actual;
    ++tally[y_pred[i]].predicted;
    if (y_true[i] == y_pred[i]) ++tally[y_true[i]].tp;
  }
  F1Report report;
  const double n = static_cast<double>(y_true.size());
  for (const auto& [label, t] : tally) {
    LabelScore s;
    s.support = t.actual;
    s.precision = t.predicted ? static_cast<double>(t.tp) / static_cast<double>(t.predicted) : 0.0;
    s.recall = t.actual ? static_cast<double>(t.tp) / static_cast<double>(t.actual) : 0.0;
    s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    report.weighted_f1 += static_cast<double>(t.actual) / n * s.f1;
    report.per_label.emplace(label, s);
  }
  report.weighted_f1 = std::clamp(report.weighted_f1, 0.0, 1.0);
  return report;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (labels != other.labels) throw Error("cannot pool confusion matrices over different label orders");
  counts += other.counts;
  return *this;
}

ConfusionMatrix confusion_matrix(const LabelList& y_true, const LabelList& y_pred, const LabelList& label_order) {
  if (y_true.size() != y_pred.size()) throw Error("confusion_matrix: y_true and y_pred differ in length");
  std::unordered_map<std::string, Eigen::Index> pos;
  for (std::size_t i = 0; i < label_order.size(); ++i) pos.emplace(label_order[i], static_cast<Eigen::Index>(i));
  auto at = [&](const std::string& l) {
    auto it = pos.find(l);
    if (it == pos.end()) throw Error("confusion_matrix: unknown label '" + l + "'");
    return it->second;
  };
  ConfusionMatrix cm;
  cm.labels = label_order;
  const auto k = static_cast<Eigen::Index>(label_order.size());
  cm.counts = decltype(cm.counts)::Zero(k, k);
  for (std::size_t i = 0; i < y_true.size(); ++i) ++cm.counts(at(y_true[i]), at(y_pred[i]));
  return cm;
}

}  // namespace linklab
