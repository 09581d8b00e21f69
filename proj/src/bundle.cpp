#include "linklab/bundle.hpp"

#include "linklab/math.hpp"
#include "linklab/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace linklab {

using nlohmann::json;

namespace {
constexpr const char* kFormat = "linklab-model";
}

ModelBundle train_bundle(const PreparedDataset& data, const NormalizationConfig& normalization,
                         const ExperimentOptions& options) {
  options.features.validate();
  const auto& links = data.dataset().links;
  if (links.empty()) throw Error("dataset has no links");
  std::vector<std::size_t> all(links.size());
  std::iota(all.begin(), all.end(), 0);

  ModelBundle bundle;
  bundle.normalization = normalization;
  bundle.encoders = fit_encoders(options.features, data, all, options.base_embeddings, mix_seed(options.seed, 1));
  const FeatureMatrix X = encode_links(bundle.encoders, data, all);
  const LabelList y = link_labels(data.dataset());

  ClassifierSpec spec = default_config(options.space, options.kind, options.smote, mix_seed(options.seed, 2));
  if (options.tune_trials && options.kind != ModelKind::ZeroR) {
    TuneOptions tune;
    tune.n_trials = *options.tune_trials;
    tune.seed = mix_seed(options.seed, 3);
    tune.jobs = options.jobs;
    spec = tune_random_search(options.kind, X, y, options.space, options.smote, tune).best;
  }
  bundle.classifier = train_classifier(spec, X, y);
  return bundle;
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
  const auto& enc = bundle.encoders;
  json j;
  j["format"] = kFormat;
  j["version"] = ModelBundle::kFormatVersion;
  j["normalization"] = normalization_to_json(bundle.normalization);
  j["features"] = feature_config_to_json(enc.config);
  j["tfidf"] = enc.tfidf ? tfidf_to_json(*enc.tfidf) : json(nullptr);
  j["metadata"] = enc.metadata ? metadata_to_json(*enc.metadata) : json(nullptr);
  j["embeddings"] = nullptr;
  if (enc.embeddings) {
    std::filesystem::path vec = path;
    vec += ".vec";
    enc.embeddings->save_text(vec);
    j["embeddings"] = vec.filename().string();
  }
  j["fit_issue_ids"] = enc.fit_issue_ids;
  j["classifier"] = classifier_to_json(bundle.classifier);

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write model bundle '" + path.string() + "'");
  out << j.dump() << '\n';
  if (!out) throw Error("I/O error writing '" + path.string() + "'");
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model bundle '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json j;
  try {
    j = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw Error("model bundle parse error at byte " + std::to_string(e.byte));
  }
  if (j.value("format", "") != kFormat) throw Error("'" + path.string() + "' is not a model bundle");
  if (j.value("version", 0) != ModelBundle::kFormatVersion) {
    throw Error("unsupported model bundle version " + j.value("version", json(0)).dump());
  }
  try {
    ModelBundle bundle;
    bundle.normalization = normalization_from_json(j.at("normalization"));
    auto& enc = bundle.encoders;
    enc.config = feature_config_from_json(j.at("features"));
    if (!j.at("tfidf").is_null()) enc.tfidf = tfidf_from_json(j["tfidf"]);
    if (!j.at("metadata").is_null()) enc.metadata = metadata_from_json(j["metadata"]);
    if (!j.at("embeddings").is_null()) {
      enc.embeddings = std::make_shared<const EmbeddingModel>(
          EmbeddingModel::load_text(path.parent_path() / j["embeddings"].get<std::string>()));
    }
    enc.fit_issue_ids = j.at("fit_issue_ids").get<std::vector<std::string>>();
    bundle.classifier = classifier_from_json(j.at("classifier"));
    return bundle;
  } catch (const json::exception& e) {
    throw Error("malformed model bundle '" + path.string() + "': " + e.what());
  }
}

std::vector<LabelSuggestion> suggest_label(const ModelBundle& bundle, const Issue& source, const Issue& target,
                                           int top_k) {
  if (top_k < 1) throw UsageError("top_k must be at least 1");
  const TokenizedIssue a = preprocess_issue(source, bundle.normalization);
  const TokenizedIssue b = preprocess_issue(target, bundle.normalization);
  const FeatureVector x = encode_link(bundle.encoders, source, a, target, b);
  const FeatureMatrix proba = bundle.classifier.predict_proba(x.transpose());

  const auto& labels = bundle.classifier.label_set;
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return proba(0, static_cast<Eigen::Index>(l)) > proba(0, static_cast<Eigen::Index>(r));
  });
  order.resize(std::min(order.size(), static_cast<std::size_t>(top_k)));
  std::vector<LabelSuggestion> out;
  for (auto i : order) out.push_back({labels[i], proba(0, static_cast<Eigen::Index>(i))});
  return out;
}

}  // namespace linklab
