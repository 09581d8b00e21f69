#include "linklab/serialize.hpp"

#include <algorithm>
#include <set>

namespace linklab {

using nlohmann::json;

FeatureMatrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) throw Error("matrix payload has the wrong length");
  FeatureMatrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = data[k++].get<double>();
  }
  return m;
}

namespace {

FeatureVector vector_from_json(const json& j) {
  FeatureVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

json vector_to_json(const FeatureVector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json forest_to_json(const ForestModel& f) {
  json trees = json::array();
  for (const auto& tree : f.trees) {
    json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
         dist = json::array();
    for (const auto& n : tree.nodes) {
      feature.push_back(n.feature);
      threshold.push_back(n.threshold);
      left.push_back(n.left);
      right.push_back(n.right);
      dist.push_back(n.distribution);
    }
    trees.push_back({{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right},
                     {"distribution", dist}});
  }
  return {{"n_classes", f.n_classes}, {"soft_voting", f.soft_voting}, {"tree_seeds", f.tree_seeds},
          {"trees", std::move(trees)}};
}

ForestModel forest_from_json(const json& j) {
  ForestModel f;
  f.n_classes = j.at("n_classes").get<int>();
  f.soft_voting = j.at("soft_voting").get<bool>();
  f.tree_seeds = j.at("tree_seeds").get<std::vector<std::uint64_t>>();
  for (const auto& jt : j.at("trees")) {
    DecisionTree tree;
    const auto& feature = jt.at("feature");
    tree.nodes.resize(feature.size());
    for (std::size_t i = 0; i < feature.size(); ++i) {
      auto& n = tree.nodes[i];
      n.feature = feature[i].get<int>();
      n.threshold = jt.at("threshold")[i].get<double>();
      n.left = jt.at("left")[i].get<int>();
      n.right = jt.at("right")[i].get<int>();
      n.distribution = jt.at("distribution")[i].get<std::vector<double>>();
    }
    f.trees.push_back(std::move(tree));
  }
  return f;
}

}  // namespace

json spec_to_json(const ClassifierSpec& spec) {
  json hp = json::object();
  for (const auto& [key, value] : spec.hyper_params) {
    if (const auto* s = std::get_if<std::string>(&value)) {
      hp[key] = *s;
    } else {
      hp[key] = std::get<double>(value);
    }
  }
  json j{{"kind", to_string(spec.kind)}, {"hyper_params", hp}, {"smote", spec.smote_enabled}, {"seed", spec.seed}};
  if (spec.kind == ModelKind::RandomForest) {
    j["bootstrap"] = spec.forest_bootstrap;
    j["soft_voting"] = spec.forest_soft_voting;
    if (!spec.forest_max_features_override.empty()) j["max_features_override"] = spec.forest_max_features_override;
  }
  if (spec.kind == ModelKind::NeuralNetwork) {
    j["hidden"] = spec.nn_hidden;
    j["batch_size"] = spec.nn_batch_size;
  }
  return j;
}

ClassifierSpec spec_from_json(const json& j) {
  ClassifierSpec spec;
  spec.kind = parse_model_kind(j.at("kind").get<std::string>());
  for (const auto& [key, value] : j.at("hyper_params").items()) {
    if (value.is_string()) {
      spec.hyper_params[key] = value.get<std::string>();
    } else {
      spec.hyper_params[key] = value.get<double>();
    }
  }
  spec.smote_enabled = j.value("smote", false);
  spec.seed = j.value("seed", std::uint64_t{0});
  spec.forest_bootstrap = j.value("bootstrap", true);
  spec.forest_soft_voting = j.value("soft_voting", true);
  spec.forest_max_features_override = j.value("max_features_override", std::string{});
  spec.nn_hidden = j.value("hidden", 128);
  spec.nn_batch_size = j.value("batch_size", 32);
  return spec;
}

json classifier_to_json(const TrainedClassifier& model) {
  json params = std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ZeroRModel>) {
          return {{"majority", m.majority}};
        } else if constexpr (std::is_same_v<T, SoftmaxRegression<double>>) {
          return {{"weights", matrix_to_json(m.weights)}, {"bias", vector_to_json(m.bias)}};
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          return forest_to_json(m);
        } else {
          return {{"w1", matrix_to_json(m.w1)}, {"b1", vector_to_json(m.b1)}, {"w2", matrix_to_json(m.w2)},
                  {"b2", vector_to_json(m.b2)}};
        }
      },
      model.parameters);
  return {{"kind", to_string(model.kind)}, {"label_set", model.label_set}, {"spec", spec_to_json(model.spec)},
          {"input_width", model.input_width}, {"parameters", std::move(params)}};
}

TrainedClassifier classifier_from_json(const json& j) {
  TrainedClassifier model;
  model.kind = parse_model_kind(j.at("kind").get<std::string>());
  model.label_set = j.at("label_set").get<LabelList>();
  model.spec = spec_from_json(j.at("spec"));
  model.input_width = j.at("input_width").get<Eigen::Index>();
  const auto& p = j.at("parameters");
  switch (model.kind) {
    case ModelKind::ZeroR:
      model.parameters = ZeroRModel{p.at("majority").get<int>()};
      break;
    case ModelKind::LogisticRegression:
      model.parameters = SoftmaxRegression<double>{matrix_from_json(p.at("weights")), vector_from_json(p.at("bias"))};
      break;
    case ModelKind::RandomForest:
      model.parameters = forest_from_json(p);
      break;
    case ModelKind::NeuralNetwork:
      model.parameters = MlpParams<double>{matrix_from_json(p.at("w1")), vector_from_json(p.at("b1")),
                                           matrix_from_json(p.at("w2")), vector_from_json(p.at("b2"))};
      break;
  }
  return model;
}

json tfidf_to_json(const TfidfModel& model) {
  std::vector<std::string> tokens(model.vocabulary.size());
  for (const auto& [t, i] : model.vocabulary) tokens[static_cast<std::size_t>(i)] = t;
  return {{"tokens", tokens}, {"doc_frequency", model.doc_frequency}, {"n_documents", model.n_documents}};
}

TfidfModel tfidf_from_json(const json& j) {
  TfidfModel model;
  const auto tokens = j.at("tokens").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < tokens.size(); ++i) model.vocabulary.emplace(tokens[i], static_cast<int>(i));
  model.doc_frequency = j.at("doc_frequency").get<std::vector<int>>();
  model.n_documents = j.at("n_documents").get<int>();
  return model;
}

namespace {

json category_to_json(const CategoryIndex& index) {
  std::vector<std::string> values(index.positions().size());
  for (const auto& [v, pos] : index.positions()) values[static_cast<std::size_t>(pos - 1)] = v;
  return values;
}

}  // namespace

json metadata_to_json(const MetadataRegistry& registry) {
  return {{"types", category_to_json(registry.type_index)},
          {"assignees", category_to_json(registry.assignee_index)},
          {"reporters", category_to_json(registry.reporter_index)},
          {"time_delta_mean", registry.time_delta_mean},
          {"time_delta_std", registry.time_delta_std}};
}

MetadataRegistry metadata_from_json(const json& j) {
  MetadataRegistry reg;
  reg.type_index = CategoryIndex(j.at("types").get<std::vector<std::string>>());
  reg.assignee_index = CategoryIndex(j.at("assignees").get<std::vector<std::string>>());
  reg.reporter_index = CategoryIndex(j.at("reporters").get<std::vector<std::string>>());
  reg.time_delta_mean = j.at("time_delta_mean").get<double>();
  reg.time_delta_std = j.at("time_delta_std").get<double>();
  return reg;
}

json feature_config_to_json(const LinkFeatureConfig& config) {
  return {{"text_encoder", to_string(config.text_encoder)},
          {"embedding_source", config.embedding_source},
          {"include_metadata", config.include_metadata},
          {"finetune_epochs", config.finetune_epochs}};
}

LinkFeatureConfig feature_config_from_json(const json& j) {
  LinkFeatureConfig c;
  c.text_encoder = parse_text_encoder(j.at("text_encoder").get<std::string>());
  c.embedding_source = j.value("embedding_source", std::string{});
  c.include_metadata = j.at("include_metadata").get<bool>();
  c.finetune_epochs = j.value("finetune_epochs", 1);
  return c;
}

json normalization_to_json(const NormalizationConfig& config) {
  const std::set<std::string> stop(config.stopwords.begin(), config.stopwords.end());
  const std::map<std::string, std::string> lemmas(config.lemmas.begin(), config.lemmas.end());
  return {{"stopwords", stop}, {"lemmas", lemmas}};
}

NormalizationConfig normalization_from_json(const json& j) {
  NormalizationConfig c;
  for (const auto& s : j.at("stopwords")) c.stopwords.insert(s.get<std::string>());
  for (const auto& [k, v] : j.at("lemmas").items()) c.lemmas.emplace(k, v.get<std::string>());
  return c;
}

}  // namespace linklab
