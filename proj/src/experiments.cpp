#include "linklab/experiments.hpp"

#include "linklab/log.hpp"
#include "linklab/math.hpp"
#include "linklab/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

namespace linklab {

using nlohmann::json;

TimeSplitSpec TimeSplitSpec::parse(const std::string& text) {
  if (text == "60-20") return {0.6, 0.2};
  if (text == "80-20") return {0.8, 0.2};
  throw UsageError("unknown split '" + text + "' (expected 60-20 or 80-20)");
}

std::string TimeSplitSpec::name() const {
  return std::to_string(static_cast<int>(std::lround(train_fraction * 100))) + "-" +
         std::to_string(static_cast<int>(std::lround(test_fraction * 100)));
}

TimeSplit time_split(const ProjectDataset& dataset, const TimeSplitSpec& spec) {
  if (spec.train_fraction <= 0 || spec.test_fraction <= 0 || spec.train_fraction + spec.test_fraction > 1 + 1e-12) {
    throw UsageError("time split fractions must be positive and sum to at most 1");
  }
  const std::size_t n = dataset.issues.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ia = dataset.issues[a];
    const auto& ib = dataset.issues[b];
    return std::tie(ia.created, ia.id) < std::tie(ib.created, ib.id);
  });
  const double dn = static_cast<double>(n);
  const auto cutoff = std::min(n, static_cast<std::size_t>(std::ceil(spec.train_fraction * dn - 1e-9)));
  const auto window_end =
      std::min(n, cutoff + static_cast<std::size_t>(std::ceil(spec.test_fraction * dn - 1e-9)));

  std::unordered_map<std::string, std::size_t> rank;
  for (std::size_t r = 0; r < n; ++r) rank[dataset.issues[order[r]].id] = r;

  TimeSplit split;
  for (std::size_t r = 0; r < window_end; ++r) {
    (r < cutoff ? split.train_issues : split.test_issues).push_back(dataset.issues[order[r]].id);
  }
  for (std::size_t li = 0; li < dataset.links.size(); ++li) {
    const auto& link = dataset.links[li];
    const auto a = rank.find(link.source);
    const auto b = rank.find(link.target);
    if (a == rank.end() || b == rank.end()) {
      ++split.discarded;
      continue;
    }
    const std::size_t later = std::max(a->second, b->second);
    if (later < cutoff) {
      split.train_links.push_back(li);
    } else if (later < window_end) {
      split.test_links.push_back(li);
    } else {
      ++split.discarded;
    }
  }
  return split;
}

std::vector<std::string> drop_rare_labels(ProjectDataset& dataset, std::size_t min_count) {
  std::vector<std::string> dropped;
  for (const auto& [label, share] : label_distribution(dataset)) {
    if (share.count < min_count) dropped.push_back(label);
  }
  if (dropped.empty()) return dropped;
  std::erase_if(dataset.links, [&](const IssueLink& l) {
    return std::binary_search(dropped.begin(), dropped.end(), l.label);
  });
  return dropped;
}

namespace {

LabelList labels_of(const ProjectDataset& dataset, const std::vector<std::size_t>& links) {
  LabelList out;
  out.reserve(links.size());
  for (auto li : links) out.push_back(dataset.links[li].label);
  return out;
}

LabelList sorted_union(const LabelList& a, const LabelList& b) {
  std::set<std::string> all(a.begin(), a.end());
  all.insert(b.begin(), b.end());
  return {all.begin(), all.end()};
}

json options_json(const ExperimentOptions& options) {
  json j = feature_config_to_json(options.features);
  j["model"] = to_string(options.kind);
  j["smote"] = options.smote;
  j["tune"] = options.tune_trials ? json(*options.tune_trials) : json(nullptr);
  return j;
}

struct FoldOutcome {
  LabelList y_true;
  LabelList y_pred;
  FitProvenance provenance;
  std::vector<TrialResult> trials;
};

/// Encodes, tunes, trains and predicts for one train/test partition.
FoldOutcome fit_and_predict(const PreparedDataset& data, const ExperimentOptions& options,
                            const std::vector<std::size_t>& train, const std::vector<std::size_t>& test,
                            const FittedEncoders* shared_encoders, std::uint64_t seed) {
  FoldOutcome out;
  FittedEncoders local;
  if (!shared_encoders) {
    local = fit_encoders(options.features, data, train, options.base_embeddings, mix_seed(seed, 1));
    shared_encoders = &local;
  }
  const FittedEncoders& encoders = *shared_encoders;
  const FeatureMatrix X_train = encode_links(encoders, data, train);
  const LabelList y_train = labels_of(data.dataset(), train);

  ClassifierSpec spec = default_config(options.space, options.kind, options.smote, mix_seed(seed, 2));
  if (options.tune_trials && options.kind != ModelKind::ZeroR) {
    TuneOptions tune;
    tune.n_trials = *options.tune_trials;
    tune.seed = mix_seed(seed, 3);
    tune.jobs = options.jobs;
    auto tuned = tune_random_search(options.kind, X_train, y_train, options.space, options.smote, tune);
    spec = tuned.best;
    out.trials = std::move(tuned.trials);
  }
  TrainingDiagnostics diagnostics;
  const TrainedClassifier model = train_classifier(spec, X_train, y_train, &diagnostics);

  out.y_true = labels_of(data.dataset(), test);
  out.y_pred = model.predict(encode_links(encoders, data, test));

  auto& prov = out.provenance;
  prov.train_links = train;
  prov.test_links = test;
  prov.encoder_issue_ids = encoders.fit_issue_ids;
  if (encoders.tfidf) {
    for (const auto& [token, index] : encoders.tfidf->vocabulary) prov.vocabulary.push_back(token);
  }
  std::set<std::size_t> seeds;
  for (const auto& origin : diagnostics.synthetic) {
    seeds.insert(train[origin.source]);
    seeds.insert(train[origin.neighbor]);
  }
  prov.smote_source_links.assign(seeds.begin(), seeds.end());
  prov.chosen = spec;
  return out;
}

void finish_report(EvalReport& report, const LabelList& y_true, const LabelList& y_pred, const LabelList& labels) {
  const F1Report pooled = weighted_f1(y_true, y_pred);
  report.per_label = pooled.per_label;
  report.confusion = confusion_matrix(y_true, y_pred, labels);
  report.test_size = y_true.size();
}

}  // namespace

EvalReport run_recovery_experiment(const PreparedDataset& data, const ExperimentOptions& options) {
  options.features.validate();
  const ProjectDataset& dataset = data.dataset();
  const LabelList y = link_labels(dataset);
  if (y.empty()) throw Error("dataset has no links");
  for (const auto& [label, share] : label_distribution(y)) {
    if (share.count < static_cast<std::size_t>(options.outer_folds)) {
      throw Error("label '" + label + "' has " + std::to_string(share.count) + " links; " +
                  std::to_string(options.outer_folds) + " folds need at least that many");
    }
  }

  std::vector<std::size_t> all(y.size());
  std::iota(all.begin(), all.end(), 0);
  std::optional<FittedEncoders> shared;
  if (options.fit_encoders_once) {
    shared = fit_encoders(options.features, data, all, options.base_embeddings, mix_seed(options.seed, 11));
  }

  const auto folds = stratified_kfold(y, options.outer_folds, options.seed);
  EvalReport report;
  report.seed = options.seed;
  report.config = options_json(options);
  report.config["outer_folds"] = options.outer_folds;
  report.config["fit_encoders_once"] = options.fit_encoders_once;
  json chosen = json::array();

  LabelList pooled_true;
  LabelList pooled_pred;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto train = complement(folds, f);
    const std::uint64_t fold_seed = mix_seed(options.seed, 100 + f);
    FoldOutcome outcome = fit_and_predict(data, options, train, folds[f], shared ? &*shared : nullptr, fold_seed);
    const double score = weighted_f1(outcome.y_true, outcome.y_pred).weighted_f1;
    logger().info("fold {}/{}: weighted F1 {:.4f}", f + 1, folds.size(), score);
    report.fold_scores.push_back(score);
    pooled_true.insert(pooled_true.end(), outcome.y_true.begin(), outcome.y_true.end());
    pooled_pred.insert(pooled_pred.end(), outcome.y_pred.begin(), outcome.y_pred.end());
    chosen.push_back(spec_to_json(outcome.provenance.chosen));
    report.provenance.push_back(std::move(outcome.provenance));
    report.trials.insert(report.trials.end(), outcome.trials.begin(), outcome.trials.end());
  }
  report.config["chosen"] = std::move(chosen);
  report.weighted_f1 = std::accumulate(report.fold_scores.begin(), report.fold_scores.end(), 0.0) /
                       static_cast<double>(report.fold_scores.size());
  finish_report(report, pooled_true, pooled_pred, sorted_union(pooled_true, pooled_pred));
  return report;
}

EvalReport run_prediction_experiment(const PreparedDataset& data, const TimeSplitSpec& split_spec,
                                     const ExperimentOptions& options) {
  options.features.validate();
  const ProjectDataset& dataset = data.dataset();
  const TimeSplit split = time_split(dataset, split_spec);
  if (split.test_links.empty()) throw Error("empty test set for split " + split_spec.name());
  const LabelList y_train = labels_of(dataset, split.train_links);
  if (label_distribution(y_train).size() < 2) {
    throw Error("training split " + split_spec.name() + " has fewer than 2 labels");
  }
  logger().info("split {}: {} train links, {} test links, {} discarded", split_spec.name(), split.train_links.size(),
                split.test_links.size(), split.discarded);

  FoldOutcome outcome = fit_and_predict(data, options, split.train_links, split.test_links, nullptr,
                                        mix_seed(options.seed, 500));
  EvalReport report;
  report.seed = options.seed;
  report.split = split_spec;
  report.config = options_json(options);
  report.config["chosen"] = spec_to_json(outcome.provenance.chosen);
  report.weighted_f1 = weighted_f1(outcome.y_true, outcome.y_pred).weighted_f1;
  finish_report(report, outcome.y_true, outcome.y_pred, sorted_union(y_train, outcome.y_true));
  report.provenance.push_back(std::move(outcome.provenance));
  report.trials = std::move(outcome.trials);
  return report;
}

json report_to_json(const EvalReport& report) {
  json j;
  j["weighted_f1"] = report.weighted_f1;
  json per_label = json::object();
  for (const auto& [label, s] : report.per_label) {
    per_label[label] = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}};
  }
  j["per_label"] = std::move(per_label);
  json counts = json::array();
  for (Eigen::Index r = 0; r < report.confusion.counts.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < report.confusion.counts.cols(); ++c) row.push_back(report.confusion.counts(r, c));
    counts.push_back(std::move(row));
  }
  j["confusion"] = {{"labels", report.confusion.labels}, {"counts", std::move(counts)}};
  j["config"] = report.config;
  j["seed"] = report.seed;
  j["test_size"] = report.test_size;
  if (report.split) {
    j["split"] = report.split->name();
  } else {
    j["folds"] = report.fold_scores;
  }
  return j;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << std::setprecision(6) << std::fixed;
  out << "label,precision,recall,f1,support\n";
  for (const auto& [label, s] : report.per_label) {
    out << csv_field(label) << ',' << s.precision << ',' << s.recall << ',' << s.f1 << ',' << s.support << '\n';
  }
  return out.str();
}

std::string report_to_text(const EvalReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "weighted F1: " << report.weighted_f1 << "  (" << report.test_size << " links";
  if (report.split) {
    out << ", split " << report.split->name();
  } else {
    out << ", folds";
    for (double s : report.fold_scores) out << ' ' << s;
  }
  out << ")\n\n";
  std::size_t width = 5;
  for (const auto& [label, s] : report.per_label) width = std::max(width, label.size());
  out << std::left << std::setw(static_cast<int>(width)) << "label" << std::right << "  precision     recall         f1  support\n";
  for (const auto& [label, s] : report.per_label) {
    out << std::left << std::setw(static_cast<int>(width)) << label << std::right << std::setw(11) << s.precision
        << std::setw(11) << s.recall << std::setw(11) << s.f1 << std::setw(9) << s.support << '\n';
  }
  return out.str();
}

}  // namespace linklab
