#pragma once

#include "linklab/classifier.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace linklab {

struct HyperParamRange {
  std::vector<HyperValue> values;
  HyperValue default_value;
};

/// Legal values per hyper-parameter key (SM_k, LR_c, RF_e, RF_f, NN_a, NN_dp, NN_e, NN_lr).
struct HyperParamSpace {
  std::map<std::string, HyperParamRange> ranges;

  /// The search space with its bold defaults.
  static HyperParamSpace standard();

  /// Keys relevant to a classifier kind, plus SM_k when SMOTE is enabled.
  static std::vector<std::string> keys_for(ModelKind kind, bool smote_enabled);
};

ClassifierSpec default_config(const HyperParamSpace& space, ModelKind kind, bool smote_enabled, std::uint64_t seed = 0);

/// Draws every relevant key uniformly from its legal set.
ClassifierSpec sample_config(const HyperParamSpace& space, ModelKind kind, bool smote_enabled, std::mt19937_64& rng);

using Fold = std::vector<std::size_t>;

/// k disjoint folds covering every index. Members of each class are shuffled
/// and dealt round-robin, continuing where the previous class stopped, so
/// per-class counts across folds differ by at most one.
std::vector<Fold> stratified_kfold(const LabelList& y, int k, std::uint64_t seed);

/// All indices not in fold `held_out`.
Fold complement(const std::vector<Fold>& folds, std::size_t held_out);

struct TrialResult {
  int trial = 0;
  ClassifierSpec config;
  double score = 0.0;
  std::vector<double> fold_scores;
  double seconds = 0.0;
  std::string error;  // non-empty when training failed (scored 0)
};

struct TuneResult {
  ClassifierSpec best;
  std::vector<TrialResult> trials;
};

struct TuneOptions {
  int n_trials = 20;
  std::uint64_t seed = 0;
  int jobs = 1;
  int inner_folds = 5;
  double nn_holdout = 0.25;
};

/// Random search. LR and RF trials are scored by mean weighted F1 over an inner
/// stratified CV; NN trials on a stratified holdout. SMOTE, when enabled, only
/// ever sees the inner training portion. Ties go to the earliest trial.
TuneResult tune_random_search(ModelKind kind, const FeatureMatrix& X, const LabelList& y,
                              const HyperParamSpace& space, bool smote_enabled, const TuneOptions& options);

/// Scores a fixed configuration the same way a tuning trial would.
TrialResult score_config(const ClassifierSpec& config, const FeatureMatrix& X, const LabelList& y,
                         const TuneOptions& options);

/// JSON-lines trial log: {"trial","config","score","seconds"} per line.
std::string trial_log_jsonl(const std::vector<TrialResult>& trials);

}  // namespace linklab
