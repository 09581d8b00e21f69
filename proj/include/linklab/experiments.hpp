#pragma once

#include "linklab/classifier.hpp"
#include "linklab/dataset.hpp"
#include "linklab/link_encoder.hpp"
#include "linklab/metrics.hpp"
#include "linklab/tuning.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace linklab {

struct TimeSplitSpec {
  double train_fraction = 0.6;
  double test_fraction = 0.2;

  /// "60-20" or "80-20".
  static TimeSplitSpec parse(const std::string& text);
  std::string name() const;
};

struct TimeSplit {
  std::vector<std::size_t> train_links;  // indices into dataset.links
  std::vector<std::size_t> test_links;
  std::vector<std::string> train_issues;  // issues before the cutoff, in creation order
  std::vector<std::string> test_issues;   // issues inside the test window
  std::size_t discarded = 0;
};

/// Orders issues by (created, id). Training links join two issues before the
/// cutoff; test links have their later endpoint in the following test window;
/// everything else is discarded.
TimeSplit time_split(const ProjectDataset& dataset, const TimeSplitSpec& spec);

struct ExperimentOptions {
  LinkFeatureConfig features;
  ModelKind kind = ModelKind::RandomForest;
  bool smote = false;
  /// Random-search trials; absent means the default hyper-parameters.
  std::optional<int> tune_trials;
  std::uint64_t seed = 0;
  int jobs = 1;
  int outer_folds = 5;
  /// Fit encoders on every link once instead of per training fold (recovery only).
  bool fit_encoders_once = false;
  std::shared_ptr<const EmbeddingModel> base_embeddings;
  HyperParamSpace space = HyperParamSpace::standard();
};

/// Provenance of one fitted model, for leakage checks.
struct FitProvenance {
  std::vector<std::size_t> train_links;
  std::vector<std::size_t> test_links;
  std::vector<std::string> encoder_issue_ids;
  std::vector<std::string> vocabulary;  // TF-IDF tokens, when fitted
  /// Links whose feature rows seeded SMOTE samples (source and neighbour).
  std::vector<std::size_t> smote_source_links;
  ClassifierSpec chosen;
};

struct EvalReport {
  double weighted_f1 = 0.0;
  std::map<std::string, LabelScore> per_label;
  ConfusionMatrix confusion;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::vector<double> fold_scores;     // recovery mode
  std::optional<TimeSplitSpec> split;  // prediction mode
  std::size_t test_size = 0;
  std::vector<FitProvenance> provenance;
  std::vector<TrialResult> trials;
};

/// Drops labels with fewer than `min_count` links; returns the dropped labels.
std::vector<std::string> drop_rare_labels(ProjectDataset& dataset, std::size_t min_count);

/// Outer stratified k-fold over links. Per fold: fit encoders on the training
/// links, tune or take defaults, train, score the held-out fold. Throws when a
/// label has fewer members than folds.
EvalReport run_recovery_experiment(const PreparedDataset& data, const ExperimentOptions& options);

/// Time-split evaluation. Encoders, metadata, tuning and training only see the
/// training links; labels unseen in training stay in the test set.
EvalReport run_prediction_experiment(const PreparedDataset& data, const TimeSplitSpec& split,
                                     const ExperimentOptions& options);

/// Report JSON: weighted_f1, per_label, confusion, config, seed, folds | split.
nlohmann::json report_to_json(const EvalReport& report);
/// One row per label: label,precision,recall,f1,support.
std::string report_to_csv(const EvalReport& report);
std::string report_to_text(const EvalReport& report);

}  // namespace linklab
