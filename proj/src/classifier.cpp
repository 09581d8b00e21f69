#include "linklab/classifier.hpp"

#include "linklab/dataset.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace linklab {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::LogisticRegression:
      return "lr";
    case ModelKind::RandomForest:
      return "rf";
    case ModelKind::NeuralNetwork:
      return "nn";
    case ModelKind::ZeroR:
      return "zeror";
  }
  return "zeror";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "lr") return ModelKind::LogisticRegression;
  if (name == "rf") return ModelKind::RandomForest;
  if (name == "nn") return ModelKind::NeuralNetwork;
  if (name == "zeror") return ModelKind::ZeroR;
  throw UsageError("unknown model '" + name + "' (expected lr, rf, nn or zeror)");
}

std::string format_hyper_value(const HyperValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  std::ostringstream os;
  os << std::get<double>(v);
  return os.str();
}

double ClassifierSpec::number(const std::string& key) const {
  auto it = hyper_params.find(key);
  if (it == hyper_params.end()) throw Error("missing hyper-parameter " + key);
  if (const auto* d = std::get_if<double>(&it->second)) return *d;
  throw Error("hyper-parameter " + key + " is not numeric");
}

std::string ClassifierSpec::text(const std::string& key) const {
  auto it = hyper_params.find(key);
  if (it == hyper_params.end()) throw Error("missing hyper-parameter " + key);
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  throw Error("hyper-parameter " + key + " is not a string");
}

std::pair<LabelList, ClassCodes> encode_labels(const LabelList& y) {
  const std::set<std::string> unique(y.begin(), y.end());
  LabelList labels(unique.begin(), unique.end());
  ClassCodes codes;
  codes.reserve(y.size());
  for (const auto& l : y) {
    codes.push_back(static_cast<int>(std::lower_bound(labels.begin(), labels.end(), l) - labels.begin()));
  }
  return {std::move(labels), std::move(codes)};
}

FeatureMatrix TrainedClassifier::predict_proba(const FeatureMatrix& X) const {
  if (X.cols() != input_width) {
    throw Error("feature width " + std::to_string(X.cols()) + " does not match training width " +
                std::to_string(input_width));
  }
  const auto k = static_cast<Eigen::Index>(label_set.size());
  return std::visit(
      [&](const auto& model) -> FeatureMatrix {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, ZeroRModel>) {
          FeatureMatrix p = FeatureMatrix::Zero(X.rows(), k);
          p.col(model.majority).setOnes();
          return p;
        } else {
          return model.predict_proba(X);
        }
      },
      parameters);
}

LabelList TrainedClassifier::predict(const FeatureMatrix& X) const {
  const FeatureMatrix p = predict_proba(X);
  LabelList out;
  out.reserve(static_cast<std::size_t>(p.rows()));
  for (Eigen::Index i = 0; i < p.rows(); ++i) out.push_back(label_set[static_cast<std::size_t>(argmax_row(p.row(i)))]);
  return out;
}

TrainedClassifier train_zeror(const LabelList& y, Eigen::Index input_width) {
  if (y.empty()) throw Error("ZeroR needs at least one label");
  TrainedClassifier model;
  model.kind = ModelKind::ZeroR;
  model.label_set = encode_labels(y).first;
  const std::string top = majority_label(y);
  model.parameters = ZeroRModel{static_cast<int>(
      std::lower_bound(model.label_set.begin(), model.label_set.end(), top) - model.label_set.begin())};
  model.input_width = input_width;
  model.spec.kind = ModelKind::ZeroR;
  return model;
}

TrainedClassifier train_classifier(const ClassifierSpec& spec, const FeatureMatrix& X, const LabelList& y,
                                   TrainingDiagnostics* diagnostics) {
  if (static_cast<std::size_t>(X.rows()) != y.size()) throw Error("feature rows and labels differ in length");
  if (diagnostics) *diagnostics = {X.rows(), {}};
  if (spec.kind == ModelKind::ZeroR) {
    auto model = train_zeror(y, X.cols());
    model.spec = spec;
    return model;
  }
  auto [labels, codes] = encode_labels(y);
  if (labels.size() < 2) throw Error("training data has a single label; use zeror");
  const int k = static_cast<int>(labels.size());

  const FeatureMatrix* data = &X;
  const ClassCodes* targets = &codes;
  SmoteResult resampled;
  if (spec.smote_enabled) {
    resampled = smote_oversample(X, codes, static_cast<int>(spec.number("SM_k")), mix_seed(spec.seed, 101));
    data = &resampled.X;
    targets = &resampled.y;
    if (diagnostics) diagnostics->synthetic = resampled.origins;
  }

  TrainedClassifier model;
  model.kind = spec.kind;
  model.label_set = std::move(labels);
  model.spec = spec;
  model.input_width = X.cols();
  switch (spec.kind) {
    case ModelKind::LogisticRegression: {
      LogisticOptions opt;
      opt.C = spec.number("LR_c");
      model.parameters = train_logistic_regression(*data, *targets, k, opt);
      break;
    }
    case ModelKind::RandomForest: {
      ForestOptions opt;
      opt.n_estimators = static_cast<int>(spec.number("RF_e"));
      opt.max_features = parse_max_features(
          spec.forest_max_features_override.empty() ? spec.text("RF_f") : spec.forest_max_features_override);
      opt.bootstrap = spec.forest_bootstrap;
      opt.soft_voting = spec.forest_soft_voting;
      opt.seed = mix_seed(spec.seed, 202);
      model.parameters = train_random_forest(*data, *targets, k, opt);
      break;
    }
    case ModelKind::NeuralNetwork: {
      MlpOptions opt;
      opt.hidden = spec.nn_hidden;
      opt.batch_size = spec.nn_batch_size;
      opt.alpha = spec.number("NN_a");
      opt.dropout = spec.number("NN_dp");
      opt.epochs = static_cast<int>(spec.number("NN_e"));
      opt.learning_rate = spec.number("NN_lr");
      opt.seed = mix_seed(spec.seed, 303);
      model.parameters = train_neural_network(*data, *targets, k, opt);
      break;
    }
    case ModelKind::ZeroR:
      break;
  }
  return model;
}

}  // namespace linklab
