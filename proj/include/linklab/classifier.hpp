#pragma once

#include "linklab/forest.hpp"
#include "linklab/logistic.hpp"
#include "linklab/neural_net.hpp"
#include "linklab/smote.hpp"
#include "linklab/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <variant>

namespace linklab {

enum class ModelKind { LogisticRegression, RandomForest, NeuralNetwork, ZeroR };

std::string to_string(ModelKind kind);
/// lr, rf, nn, zeror.
ModelKind parse_model_kind(const std::string& name);

/// Numeric hyper-parameters are doubles; RF_f is a string ("log2"/"sqrt").
using HyperValue = std::variant<double, std::string>;
using HyperParams = std::map<std::string, HyperValue>;

std::string format_hyper_value(const HyperValue& v);

struct ClassifierSpec {
  ModelKind kind = ModelKind::ZeroR;
  HyperParams hyper_params;
  bool smote_enabled = false;
  std::uint64_t seed = 0;
  /// Forest-only switches for unit tests and ablations.
  bool forest_bootstrap = true;
  bool forest_soft_voting = true;
  std::string forest_max_features_override;  // "all" disables feature subsampling
  /// Neural-network architecture knobs.
  int nn_hidden = 128;
  int nn_batch_size = 32;

  double number(const std::string& key) const;
  std::string text(const std::string& key) const;

  bool operator==(const ClassifierSpec&) const = default;
};

struct ZeroRModel {
  int majority = 0;
  bool operator==(const ZeroRModel&) const = default;
};

using ModelParameters = std::variant<ZeroRModel, SoftmaxRegression<double>, ForestModel, MlpParams<double>>;

/// A fitted model over an ordered label set.
struct TrainedClassifier {
  ModelKind kind = ModelKind::ZeroR;
  LabelList label_set;  // lexicographic order; class code i is label_set[i]
  ClassifierSpec spec;
  ModelParameters parameters;
  Eigen::Index input_width = 0;

  /// Row-stochastic probabilities, one column per label in label_set.
  FeatureMatrix predict_proba(const FeatureMatrix& X) const;
  /// Argmax of predict_proba; the lexicographically first label wins ties.
  LabelList predict(const FeatureMatrix& X) const;

  bool operator==(const TrainedClassifier&) const = default;
};

/// ZeroR on labels alone: the majority label, lexicographic tie-break.
TrainedClassifier train_zeror(const LabelList& y, Eigen::Index input_width = 0);

/// What the fit actually consumed: the caller's rows plus any SMOTE rows.
struct TrainingDiagnostics {
  Eigen::Index original_rows = 0;
  std::vector<SyntheticOrigin> synthetic;  // row indices refer to the caller's X
};

/// Encodes labels, applies SMOTE when enabled (SM_k), then trains the requested kind.
TrainedClassifier train_classifier(const ClassifierSpec& spec, const FeatureMatrix& X, const LabelList& y,
                                   TrainingDiagnostics* diagnostics = nullptr);

/// Sorted unique labels and the class code of every entry.
std::pair<LabelList, ClassCodes> encode_labels(const LabelList& y);

}  // namespace linklab
