#include "linklab/tuning.hpp"

#include "linklab/metrics.hpp"
#include "linklab/serialize.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

namespace linklab {

HyperParamSpace HyperParamSpace::standard() {
  auto powers = [](std::initializer_list<int> exps) {
    std::vector<HyperValue> v;
    for (int e : exps) v.emplace_back(std::pow(10.0, e));
    return v;
  };
  HyperParamSpace s;
  s.ranges["SM_k"] = {{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0}, 5.0};
  s.ranges["LR_c"] = {powers({-2, -1, 0, 1, 2}), 1.0};
  s.ranges["RF_e"] = {{10.0, 100.0, 1000.0}, 10.0};
  s.ranges["RF_f"] = {{std::string("log2"), std::string("sqrt")}, std::string("sqrt")};
  s.ranges["NN_a"] = {powers({-4, -3, -2, -1}), 1e-4};
  s.ranges["NN_dp"] = {{0.1, 0.25, 0.5}, 0.5};
  s.ranges["NN_e"] = {{25.0, 50.0, 75.0, 100.0, 125.0}, 25.0};
  s.ranges["NN_lr"] = {powers({-3, -2, -1, 0}), 1e-3};
  return s;
}

std::vector<std::string> HyperParamSpace::keys_for(ModelKind kind, bool smote_enabled) {
  std::vector<std::string> keys;
  switch (kind) {
    case ModelKind::LogisticRegression:
      keys = {"LR_c"};
      break;
    case ModelKind::RandomForest:
      keys = {"RF_e", "RF_f"};
      break;
    case ModelKind::NeuralNetwork:
      keys = {"NN_a", "NN_dp", "NN_e", "NN_lr"};
      break;
    case ModelKind::ZeroR:
      break;
  }
  if (smote_enabled && kind != ModelKind::ZeroR) keys.insert(keys.begin(), "SM_k");
  return keys;
}

ClassifierSpec default_config(const HyperParamSpace& space, ModelKind kind, bool smote_enabled, std::uint64_t seed) {
  ClassifierSpec spec;
  spec.kind = kind;
  spec.smote_enabled = smote_enabled && kind != ModelKind::ZeroR;
  spec.seed = seed;
  for (const auto& key : HyperParamSpace::keys_for(kind, smote_enabled)) {
    spec.hyper_params[key] = space.ranges.at(key).default_value;
  }
  return spec;
}

ClassifierSpec sample_config(const HyperParamSpace& space, ModelKind kind, bool smote_enabled, std::mt19937_64& rng) {
  ClassifierSpec spec = default_config(space, kind, smote_enabled);
  for (const auto& key : HyperParamSpace::keys_for(kind, smote_enabled)) {
    const auto& values = space.ranges.at(key).values;
    std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
    spec.hyper_params[key] = values[pick(rng)];
  }
  return spec;
}

std::vector<Fold> stratified_kfold(const LabelList& y, int k, std::uint64_t seed) {
  if (k < 2) throw Error("stratified k-fold needs k >= 2");
  if (static_cast<std::size_t>(k) > y.size()) {
    throw Error("cannot split " + std::to_string(y.size()) + " samples into " + std::to_string(k) + " folds");
  }
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < y.size(); ++i) members[y[i]].push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<Fold> folds(static_cast<std::size_t>(k));
  std::size_t next = 0;
  for (auto& [label, idx] : members) {
    std::shuffle(idx.begin(), idx.end(), rng);
    for (auto i : idx) {
      folds[next].push_back(i);
      next = (next + 1) % folds.size();
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

Fold complement(const std::vector<Fold>& folds, std::size_t held_out) {
  Fold out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f != held_out) out.insert(out.end(), folds[f].begin(), folds[f].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

FeatureMatrix take_rows(const FeatureMatrix& X, const Fold& rows) {
  FeatureMatrix out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

LabelList take_labels(const LabelList& y, const Fold& rows) {
  LabelList out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(y[r]);
  return out;
}

double fit_and_score(const ClassifierSpec& config, const FeatureMatrix& X, const LabelList& y, const Fold& train,
                     const Fold& validation) {
  const auto model = train_classifier(config, take_rows(X, train), take_labels(y, train));
  return weighted_f1(take_labels(y, validation), model.predict(take_rows(X, validation))).weighted_f1;
}

}  // namespace

TrialResult score_config(const ClassifierSpec& config, const FeatureMatrix& X, const LabelList& y,
                         const TuneOptions& options) {
  TrialResult result;
  result.config = config;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (config.kind == ModelKind::NeuralNetwork) {
      const int holdout_folds = std::max(2, static_cast<int>(std::lround(1.0 / options.nn_holdout)));
      const auto folds = stratified_kfold(y, holdout_folds, options.seed);
      result.fold_scores.push_back(fit_and_score(config, X, y, complement(folds, 0), folds[0]));
    } else {
      const auto folds = stratified_kfold(y, options.inner_folds, options.seed);
      for (std::size_t f = 0; f < folds.size(); ++f) {
        result.fold_scores.push_back(fit_and_score(config, X, y, complement(folds, f), folds[f]));
      }
    }
    result.score = std::accumulate(result.fold_scores.begin(), result.fold_scores.end(), 0.0) /
                   static_cast<double>(result.fold_scores.size());
  } catch (const Error& e) {
    result.error = e.what();
    result.score = 0.0;
    result.fold_scores.clear();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

TuneResult tune_random_search(ModelKind kind, const FeatureMatrix& X, const LabelList& y,
                              const HyperParamSpace& space, bool smote_enabled, const TuneOptions& options) {
  if (options.n_trials < 1) throw Error("random search needs at least one trial");
  std::mt19937_64 rng(options.seed);
  TuneResult result;
  result.trials.resize(static_cast<std::size_t>(options.n_trials));
  std::vector<ClassifierSpec> configs;
  for (int t = 0; t < options.n_trials; ++t) {
    configs.push_back(sample_config(space, kind, smote_enabled, rng));
    configs.back().seed = options.seed + static_cast<std::uint64_t>(t);
  }

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < options.n_trials; t = next++) {
      auto r = score_config(configs[static_cast<std::size_t>(t)], X, y, options);
      r.trial = t;
      result.trials[static_cast<std::size_t>(t)] = std::move(r);
    }
  };
  const int jobs = std::clamp(options.jobs, 1, options.n_trials);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::size_t best = 0;
  for (std::size_t t = 1; t < result.trials.size(); ++t) {
    if (result.trials[t].score > result.trials[best].score) best = t;
  }
  result.best = result.trials[best].config;
  return result;
}

std::string trial_log_jsonl(const std::vector<TrialResult>& trials) {
  std::string out;
  for (const auto& t : trials) {
    nlohmann::json j{{"trial", t.trial}, {"config", spec_to_json(t.config)}, {"score", t.score}, {"seconds", t.seconds}};
    if (!t.error.empty()) j["error"] = t.error;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace linklab
