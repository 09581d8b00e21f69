#pragma once

#include "linklab/classifier.hpp"
#include "linklab/experiments.hpp"
#include "linklab/link_encoder.hpp"
#include "linklab/textprep.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace linklab {

/// Everything needed to label a new link: normaliser, encoders and classifier.
struct ModelBundle {
  static constexpr int kFormatVersion = 1;

  NormalizationConfig normalization;
  FittedEncoders encoders;
  TrainedClassifier classifier;
};

/// Fits encoders and a classifier on every link of the dataset, tuning first
/// when the options ask for it.
ModelBundle train_bundle(const PreparedDataset& data, const NormalizationConfig& normalization,
                         const ExperimentOptions& options);

/// JSON container. Embedding vectors are written next to it as `<path>.vec`.
void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

struct LabelSuggestion {
  std::string label;
  double probability = 0.0;
};

/// Top-k labels for a prospective link from `source` to `target`, by
/// descending probability; label order breaks ties. Throws when top_k < 1.
std::vector<LabelSuggestion> suggest_label(const ModelBundle& bundle, const Issue& source, const Issue& target,
                                           int top_k);

}  // namespace linklab
