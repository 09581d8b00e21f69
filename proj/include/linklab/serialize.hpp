#pragma once

#include "linklab/classifier.hpp"
#include "linklab/link_encoder.hpp"
#include "linklab/metadata.hpp"
#include "linklab/textprep.hpp"
#include "linklab/tfidf.hpp"

#include <json.hpp>

namespace linklab {

nlohmann::json spec_to_json(const ClassifierSpec& spec);
ClassifierSpec spec_from_json(const nlohmann::json& j);

nlohmann::json classifier_to_json(const TrainedClassifier& model);
TrainedClassifier classifier_from_json(const nlohmann::json& j);

nlohmann::json tfidf_to_json(const TfidfModel& model);
TfidfModel tfidf_from_json(const nlohmann::json& j);

nlohmann::json metadata_to_json(const MetadataRegistry& registry);
MetadataRegistry metadata_from_json(const nlohmann::json& j);

nlohmann::json feature_config_to_json(const LinkFeatureConfig& config);
LinkFeatureConfig feature_config_from_json(const nlohmann::json& j);

nlohmann::json normalization_to_json(const NormalizationConfig& config);
NormalizationConfig normalization_from_json(const nlohmann::json& j);

/// {"rows","cols","data"} with data in row-major order.
template <typename Derived>
nlohmann::json matrix_to_json(const Eigen::MatrixBase<Derived>& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

FeatureMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace linklab
