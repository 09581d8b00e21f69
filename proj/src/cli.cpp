#include "linklab/cli.hpp"

#include "linklab/bundle.hpp"
#include "linklab/dataset.hpp"
#include "linklab/embeddings.hpp"
#include "linklab/experiments.hpp"
#include "linklab/ingestion.hpp"
#include "linklab/log.hpp"
#include "linklab/math.hpp"
#include "linklab/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace linklab {

using nlohmann::json;

namespace {

/// Replaces `--config FILE` with the flags it holds. Keys are long flag names;
/// a flag also given on the command line keeps its command-line value.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> result;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 == args.size()) throw UsageError("--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      result.push_back(args[i]);
    }
  }
  if (path.empty()) return result;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw UsageError("config file: JSON parse error at byte " + std::to_string(e.byte));
  }
  if (!j.is_object()) throw UsageError("config file must hold a flat JSON object");
  auto given = [&](const std::string& flag) {
    return std::any_of(result.begin(), result.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  std::vector<std::string> extra;
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
    } else if (value.is_string()) {
      extra.push_back(flag + "=" + value.get<std::string>());
    } else if (value.is_number()) {
      extra.push_back(flag + "=" + value.dump());
    } else {
      throw UsageError("config key '" + key + "' must be a string, number or boolean");
    }
  }
  result.insert(result.end(), extra.begin(), extra.end());
  return result;
}

struct CommonFlags {
  std::string data;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  int jobs = 1;
  bool no_timestamp = false;
};

struct ExperimentFlags {
  std::string encoder = "tfidf";
  std::string embeddings;
  bool meta = false;
  std::string model = "rf";
  bool smote = false;
  std::optional<int> tune;
  std::string split = "60-20";
  int min_label_count = 20;
  double min_label_fraction = 0.01;
  bool fit_encoders_once = false;
  int finetune_epochs = 1;
  int folds = 5;
  std::string save_model;
  std::string trial_log;
};

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw Error("cannot write '" + path + "'");
  file << text;
  if (!file) throw Error("I/O error writing '" + path + "'");
}

std::string now_utc() {
  return format_timestamp(std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()));
}

json common_json(const CommonFlags& c) {
  return {{"data", c.data}, {"format", c.format}, {"seed", c.seed}, {"jobs", c.jobs}};
}

json experiment_json(const ExperimentFlags& e) {
  return {{"encoder", e.encoder},
          {"embeddings", e.embeddings},
          {"meta", e.meta},
          {"model", e.model},
          {"smote", e.smote},
          {"tune", e.tune ? json(*e.tune) : json(nullptr)},
          {"min-label-count", e.min_label_count},
          {"min-label-fraction", e.min_label_fraction},
          {"fit-encoders-once", e.fit_encoders_once},
          {"finetune-epochs", e.finetune_epochs}};
}

void add_common(CLI::App* sub, CommonFlags& c, bool with_format) {
  sub->add_option("--out", c.out, "Output file (stdout when absent)");
  sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_flag("--no-timestamp", c.no_timestamp, "Omit the generation time from reports");
  if (with_format) {
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
  }
}

void add_experiment(CLI::App* sub, ExperimentFlags& e) {
  sub->add_option("--encoder", e.encoder, "Text encoder")
      ->check(CLI::IsMember({"tfidf", "embedding", "none", "wiki", "stack", "proj"}))
      ->capture_default_str();
  sub->add_option("--embeddings", e.embeddings, "Word vectors in word2vec text format");
  sub->add_flag("--meta", e.meta, "Add issue metadata features");
  sub->add_option("--model", e.model, "Classifier")
      ->check(CLI::IsMember({"lr", "rf", "nn", "zeror"}))
      ->capture_default_str();
  sub->add_flag("--smote", e.smote, "Oversample minority labels with SMOTE");
  sub->add_option("--tune", e.tune, "Random-search trials (default hyper-parameters when absent)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--min-label-count", e.min_label_count, "Drop labels with fewer links")->capture_default_str();
  sub->add_option("--min-label-fraction", e.min_label_fraction, "Drop labels with a smaller share of links")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sub->add_option("--finetune-epochs", e.finetune_epochs, "Embedding fine-tuning epochs on training text")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--trial-log", e.trial_log, "Write tuning trials as JSON lines");
}

ProjectDataset load_filtered(const CommonFlags& c, const ExperimentFlags& e) {
  if (c.data.empty()) throw UsageError("--data is required");
  ProjectDataset dataset = load_dataset(c.data);
  const auto violations = validate_dataset(dataset);
  for (const auto& v : violations) log_warn("dataset: " + v.message);
  const std::size_t before = dataset.links.size();
  dataset = filter_labels(dataset, {e.min_label_fraction, e.min_label_count});
  logger().info("label filter kept {} of {} links", dataset.links.size(), before);
  return dataset;
}

ExperimentOptions experiment_options(const CommonFlags& c, const ExperimentFlags& e) {
  ExperimentOptions o;
  o.features.text_encoder = parse_text_encoder(e.encoder);
  o.features.embedding_source = e.encoder == "embedding" ? e.embeddings : e.encoder;
  o.features.include_metadata = e.meta;
  o.features.finetune_epochs = e.finetune_epochs;
  o.features.validate();
  o.kind = parse_model_kind(e.model);
  o.smote = e.smote;
  o.tune_trials = e.tune;
  o.seed = c.seed;
  o.jobs = c.jobs;
  o.outer_folds = e.folds;
  o.fit_encoders_once = e.fit_encoders_once;
  if (o.features.text_encoder == TextEncoder::Embedding) {
    if (e.embeddings.empty()) throw UsageError("--encoder " + e.encoder + " needs --embeddings FILE");
    o.base_embeddings = std::make_shared<const EmbeddingModel>(EmbeddingModel::load_text(e.embeddings));
  }
  return o;
}

std::string render_report(const EvalReport& report, const json& run_config, const CommonFlags& c) {
  if (c.format == "csv") return report_to_csv(report);
  if (c.format == "text") return report_to_text(report);
  json j = report_to_json(report);
  json config = run_config;
  config["chosen"] = report.config.value("chosen", json(nullptr));
  j["config"] = std::move(config);
  if (!c.no_timestamp) j["generated_at"] = now_utc();
  return j.dump(2) + "\n";
}

json shares_json(const std::map<std::string, LabelShare>& shares) {
  json j = json::object();
  for (const auto& [label, s] : shares) j[label] = {{"count", s.count}, {"fraction", s.fraction}};
  return j;
}

int cmd_stats(const CommonFlags& c, const ExperimentFlags& e, std::ostream& out) {
  if (c.data.empty()) throw UsageError("--data is required");
  if (std::filesystem::is_directory(c.data)) {
    const auto stats = linked_ratio_over_directory(c.data);
    json j{{"projects", stats.projects}, {"mean_linked_ratio", stats.mean}, {"stddev_linked_ratio", stats.stddev},
           {"per_project", stats.per_project}};
    write_output(j.dump(2) + "\n", c.out, out);
    return 0;
  }
  const ProjectDataset dataset = load_dataset(c.data);
  const ProjectDataset filtered = filter_labels(dataset, {e.min_label_fraction, e.min_label_count});
  const auto all = label_distribution(dataset);
  const auto kept = label_distribution(filtered);
  const double ratio = dataset.issues.empty() ? 0.0 : linked_issue_ratio(dataset);
  const double zeror = filtered.links.empty() ? 0.0 : analytic_zeror_f1(link_labels(filtered));

  std::ostringstream text;
  if (c.format == "json") {
    json j{{"project", dataset.project},
           {"issues", dataset.issues.size()},
           {"links", dataset.links.size()},
           {"linked_issue_ratio", ratio},
           {"labels", shares_json(all)},
           {"filtered", {{"links", filtered.links.size()}, {"labels", shares_json(kept)}, {"zeror_f1", zeror}}}};
    text << j.dump(2) << '\n';
  } else if (c.format == "csv") {
    text << "label,count,fraction,kept\n";
    for (const auto& [label, s] : all) text << label << ',' << s.count << ',' << s.fraction << ',' << kept.contains(label) << '\n';
  } else {
    text << dataset.project << ": " << dataset.issues.size() << " issues, " << dataset.links.size()
         << " links, linked-issue ratio " << ratio << "\n";
    for (const auto& [label, s] : all) {
      text << "  " << label << ": " << s.count << (kept.contains(label) ? "" : " (filtered)") << '\n';
    }
    text << "after filtering: " << filtered.links.size() << " links, ZeroR weighted F1 " << zeror << '\n';
  }
  write_output(text.str(), c.out, out);
  return 0;
}

int cmd_load(const CommonFlags& c, std::ostream& out) {
  if (c.data.empty()) throw UsageError("--data is required");
  const ProjectDataset dataset = load_dataset(c.data);
  const auto violations = validate_dataset(dataset);
  json j{{"project", dataset.project}, {"issues", dataset.issues.size()}, {"links", dataset.links.size()}};
  json list = json::array();
  for (const auto& v : violations) list.push_back({{"subject", v.subject}, {"message", v.message}});
  j["violations"] = std::move(list);
  write_output(j.dump(2) + "\n", c.out, out);
  return violations.empty() ? 0 : 1;
}

struct IngestFlags {
  std::string url;
  std::string project;
  std::string dump;
  std::string token_env = "JIRA_TOKEN";
  int page_size = 100;
  int max_retries = 3;
  double timeout = 30.0;
};

int cmd_ingest(const CommonFlags& c, const IngestFlags& f, std::ostream& out) {
  std::vector<RawIssueRecord> records;
  if (!f.dump.empty()) {
    records = load_dump(f.dump);
  } else {
    if (f.url.empty() || f.project.empty()) throw UsageError("ingest needs --dump FILE or --url and --project");
    JiraSourceConfig source;
    source.base_url = f.url;
    source.project_key = f.project;
    source.page_size = f.page_size;
    source.max_retries = f.max_retries;
    source.request_timeout = f.timeout;
    if (const char* token = std::getenv(f.token_env.c_str()); token && *token) source.auth_token = token;
    records = fetch_project(source);
  }
  IngestionReport report;
  ProjectDataset dataset = canonicalize_links(records, &report);
  if (!f.project.empty()) dataset.project = f.project;
  for (const auto& v : validate_dataset(dataset)) log_warn("dataset: " + v.message);
  logger().info("{} issues, {} links; {} external, {} self, {} duplicate, {} disagreeing entries dropped",
                dataset.issues.size(), dataset.links.size(), report.external_drops, report.self_links,
                report.duplicates, report.disagreements);
  if (c.out.empty()) {
    out << dataset_to_json(dataset) << '\n';
  } else {
    save_dataset(dataset, c.out);
  }
  return 0;
}

struct EmbeddingFlags {
  std::string corpus;
  int dims = 100;
  int epochs = 5;
  int window = 5;
  int negatives = 5;
  int min_count = 5;
  std::int64_t buckets = 2'000'000;
  double learning_rate = 0.05;
};

int cmd_train_embeddings(const CommonFlags& c, const EmbeddingFlags& f) {
  if (f.corpus.empty()) throw UsageError("--corpus is required");
  if (c.out.empty()) throw UsageError("--out is required");
  EmbeddingTrainingOptions o;
  o.dims = f.dims;
  o.epochs = f.epochs;
  o.window = f.window;
  o.negatives = f.negatives;
  o.min_count = f.min_count;
  o.bucket_count = f.buckets;
  o.learning_rate = f.learning_rate;
  o.seed = c.seed;
  o.threads = c.jobs;
  const EmbeddingModel model = train_embeddings(f.corpus, NormalizationConfig::bundled(), o);
  model.save_text(c.out);
  logger().info("wrote {} vectors of {} dimensions to {}", model.vocabulary_size(), model.dims(), c.out);
  return 0;
}

void write_trial_log(const EvalReport& report, const ExperimentFlags& e) {
  if (e.trial_log.empty()) return;
  std::ofstream log(e.trial_log, std::ios::trunc);
  if (!log) throw Error("cannot write '" + e.trial_log + "'");
  log << trial_log_jsonl(report.trials);
}

int cmd_recover(const CommonFlags& c, const ExperimentFlags& e, std::ostream& out) {
  const ExperimentOptions options = experiment_options(c, e);
  ProjectDataset dataset = load_filtered(c, e);
  for (const auto& label : drop_rare_labels(dataset, static_cast<std::size_t>(options.outer_folds))) {
    log_warn("label '" + label + "' has fewer than " + std::to_string(options.outer_folds) + " links; dropped");
  }
  const auto normalization = NormalizationConfig::bundled();
  const PreparedDataset data(std::move(dataset), normalization);
  const EvalReport report = run_recovery_experiment(data, options);
  write_trial_log(report, e);

  json run = common_json(c);
  run.update(experiment_json(e));
  run["folds"] = e.folds;
  run["command"] = "recover";
  write_output(render_report(report, run, c), c.out, out);

  if (!e.save_model.empty()) {
    save_bundle(train_bundle(data, normalization, options), e.save_model);
    logger().info("model bundle written to {}", e.save_model);
  }
  return 0;
}

int cmd_predict(const CommonFlags& c, const ExperimentFlags& e, std::ostream& out) {
  const ExperimentOptions options = experiment_options(c, e);
  const TimeSplitSpec split = TimeSplitSpec::parse(e.split);
  const PreparedDataset data(load_filtered(c, e), NormalizationConfig::bundled());
  const EvalReport report = run_prediction_experiment(data, split, options);
  write_trial_log(report, e);

  json run = common_json(c);
  run.update(experiment_json(e));
  run["split"] = e.split;
  run["command"] = "predict-future";
  write_output(render_report(report, run, c), c.out, out);
  return 0;
}

struct SuggestFlags {
  std::string bundle;
  std::string source;
  std::string target;
  int top_k = 3;
};

int cmd_suggest(const CommonFlags& c, const SuggestFlags& f, std::ostream& out) {
  if (c.data.empty()) throw UsageError("--data is required to look up the issues");
  const ModelBundle bundle = load_bundle(f.bundle);
  const ProjectDataset dataset = load_dataset(c.data);
  auto find = [&](const std::string& id) -> const Issue& {
    const auto pos = dataset.find_issue(id);
    if (!pos) throw Error("issue '" + id + "' not found in " + c.data);
    return dataset.issues[*pos];
  };
  const auto suggestions = suggest_label(bundle, find(f.source), find(f.target), f.top_k);
  std::ostringstream text;
  if (c.format == "json") {
    json j = json::array();
    for (const auto& s : suggestions) j.push_back({{"label", s.label}, {"probability", s.probability}});
    text << j.dump(2) << '\n';
  } else if (c.format == "csv") {
    text << "label,probability\n";
    for (const auto& s : suggestions) text << s.label << ',' << s.probability << '\n';
  } else {
    for (const auto& s : suggestions) text << s.label << '\t' << s.probability << '\n';
  }
  write_output(text.str(), c.out, out);
  return 0;
}

struct SynthFlags {
  int issues = 1500;
  int links = -1;
  int labels = 5;
  double noise = 0.1;
  std::string rule = "type-pair-shared";
  std::string project = "SYN";
  bool shuffle_labels = false;
};

int cmd_synth(const CommonFlags& c, const SynthFlags& f, std::ostream& out) {
  SyntheticOptions o;
  o.n_issues = f.issues;
  o.n_links = f.links;
  o.n_labels = f.labels;
  o.noise = f.noise;
  o.rule = parse_synthetic_rule(f.rule);
  o.seed = c.seed;
  o.project = f.project;
  ProjectDataset dataset = generate_synthetic(o);
  if (f.shuffle_labels) {
    LabelList labels = link_labels(dataset);
    std::mt19937_64 rng(mix_seed(c.seed, 77));
    std::shuffle(labels.begin(), labels.end(), rng);
    for (std::size_t i = 0; i < labels.size(); ++i) dataset.links[i].label = labels[i];
  }
  if (c.out.empty()) {
    out << dataset_to_json(dataset) << '\n';
  } else {
    save_dataset(dataset, c.out);
  }
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Issue link label recovery and prediction", "linklab"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  CommonFlags common;
  ExperimentFlags exp;
  IngestFlags ingest;
  EmbeddingFlags emb;
  SuggestFlags suggest;
  SynthFlags synth;

  std::string config_path;
  auto with_config = [&config_path](CLI::App* sub) {
    sub->add_option("--config", config_path, "Flat JSON file of flag values; command-line flags take precedence");
  };

  auto* c_ingest = app.add_subcommand("ingest", "Fetch or read a Jira export and write a dataset");
  with_config(c_ingest);
  add_common(c_ingest, common, false);
  c_ingest->add_option("--url", ingest.url, "Jira base URL");
  c_ingest->add_option("--project", ingest.project, "Project key");
  c_ingest->add_option("--dump", ingest.dump, "Exported issue JSON instead of a live server");
  c_ingest->add_option("--token-env", ingest.token_env, "Environment variable holding the bearer token")
      ->capture_default_str();
  c_ingest->add_option("--page-size", ingest.page_size)->check(CLI::PositiveNumber)->capture_default_str();
  c_ingest->add_option("--max-retries", ingest.max_retries)->check(CLI::NonNegativeNumber)->capture_default_str();
  c_ingest->add_option("--timeout", ingest.timeout, "Request timeout in seconds")->capture_default_str();

  auto* c_load = app.add_subcommand("load", "Validate a dataset file");
  with_config(c_load);
  add_common(c_load, common, false);
  c_load->add_option("--data", common.data, "Dataset JSON")->required();

  auto* c_stats = app.add_subcommand("stats", "Label distribution and linked-issue ratio");
  with_config(c_stats);
  add_common(c_stats, common, true);
  c_stats->add_option("--data", common.data, "Dataset JSON, or a directory of them")->required();
  c_stats->add_option("--min-label-count", exp.min_label_count)->capture_default_str();
  c_stats->add_option("--min-label-fraction", exp.min_label_fraction)->capture_default_str();

  auto* c_emb = app.add_subcommand("train-embeddings", "Train subword skip-gram vectors on a text corpus");
  with_config(c_emb);
  add_common(c_emb, common, false);
  c_emb->add_option("--corpus", emb.corpus, "Plain text, one sentence per line")->required();
  c_emb->add_option("--dims", emb.dims)->check(CLI::PositiveNumber)->capture_default_str();
  c_emb->add_option("--epochs", emb.epochs)->check(CLI::PositiveNumber)->capture_default_str();
  c_emb->add_option("--window", emb.window)->check(CLI::PositiveNumber)->capture_default_str();
  c_emb->add_option("--negatives", emb.negatives)->check(CLI::PositiveNumber)->capture_default_str();
  c_emb->add_option("--min-count", emb.min_count)->check(CLI::PositiveNumber)->capture_default_str();
  c_emb->add_option("--buckets", emb.buckets)->check(CLI::NonNegativeNumber)->capture_default_str();
  c_emb->add_option("--lr", emb.learning_rate)->check(CLI::PositiveNumber)->capture_default_str();

  auto* c_recover = app.add_subcommand("recover", "Cross-validated link label recovery");
  with_config(c_recover);
  add_common(c_recover, common, true);
  add_experiment(c_recover, exp);
  c_recover->add_option("--data", common.data, "Dataset JSON")->required();
  c_recover->add_flag("--fit-encoders-once", exp.fit_encoders_once, "Fit encoders on all links instead of per fold");
  c_recover->add_option("--folds", exp.folds, "Outer folds")->check(CLI::Range(2, 100))->capture_default_str();
  c_recover->add_option("--save-model", exp.save_model, "Also train on every link and write a model bundle");

  auto* c_predict = app.add_subcommand("predict-future", "Time-split link label prediction");
  with_config(c_predict);
  add_common(c_predict, common, true);
  add_experiment(c_predict, exp);
  c_predict->add_option("--data", common.data, "Dataset JSON")->required();
  c_predict->add_option("--split", exp.split, "Train-test split")
      ->check(CLI::IsMember({"60-20", "80-20"}))
      ->capture_default_str();

  auto* c_suggest = app.add_subcommand("suggest", "Rank labels for a prospective link");
  with_config(c_suggest);
  add_common(c_suggest, common, true);
  c_suggest->add_option("--bundle", suggest.bundle, "Model bundle written by recover --save-model")->required();
  c_suggest->add_option("--data", common.data, "Dataset holding both issues")->required();
  c_suggest->add_option("--source", suggest.source, "Source issue id")->required();
  c_suggest->add_option("--target", suggest.target, "Target issue id")->required();
  c_suggest->add_option("--top-k", suggest.top_k)->check(CLI::PositiveNumber)->capture_default_str();

  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic dataset with a planted labelling rule");
  with_config(c_synth);
  add_common(c_synth, common, false);
  c_synth->add_option("--issues", synth.issues)->check(CLI::Range(2, 10'000'000))->capture_default_str();
  c_synth->add_option("--links", synth.links, "Number of links (default: one per issue)");
  c_synth->add_option("--labels", synth.labels)->check(CLI::Range(2, 1000))->capture_default_str();
  c_synth->add_option("--noise", synth.noise)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  c_synth->add_option("--rule", synth.rule)
      ->check(CLI::IsMember({"type-pair", "type-pair-shared"}))
      ->capture_default_str();
  c_synth->add_option("--project", synth.project)->capture_default_str();
  c_synth->add_flag("--shuffle-labels", synth.shuffle_labels, "Permute labels across links (negative control)");

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(args);
  } catch (const UsageError& e) {
    std::cerr << "linklab: " << e.what() << "\n";
    return 2;
  }
  std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "linklab: " << e.what() << "\n";
    std::cerr << "run 'linklab --help' for usage\n";
    return 2;
  }
  logger().set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    logger().info("seed {}", common.seed);
    if (c_ingest->parsed()) return cmd_ingest(common, ingest, out);
    if (c_load->parsed()) return cmd_load(common, out);
    if (c_stats->parsed()) return cmd_stats(common, exp, out);
    if (c_emb->parsed()) return cmd_train_embeddings(common, emb);
    if (c_recover->parsed()) return cmd_recover(common, exp, out);
    if (c_predict->parsed()) return cmd_predict(common, exp, out);
    if (c_suggest->parsed()) return cmd_suggest(common, suggest, out);
    if (c_synth->parsed()) return cmd_synth(common, synth, out);
  } catch (const UsageError& e) {
    std::cerr << "linklab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "linklab: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run_command(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_command(args, std::cout);
}

}  // namespace linklab
