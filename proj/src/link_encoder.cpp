#include "linklab/link_encoder.hpp"

#include <algorithm>

namespace linklab {

std::string to_string(TextEncoder e) {
  switch (e) {
    case TextEncoder::Tfidf:
      return "tfidf";
    case TextEncoder::Embedding:
      return "embedding";
    case TextEncoder::None:
      return "none";
  }
  return "none";
}

TextEncoder parse_text_encoder(const std::string& name) {
  if (name == "tfidf") return TextEncoder::Tfidf;
  if (name == "embedding" || name == "wiki" || name == "stack" || name == "proj") return TextEncoder::Embedding;
  if (name == "none") return TextEncoder::None;
  throw UsageError("unknown text encoder '" + name + "'");
}

void LinkFeatureConfig::validate() const {
  if (text_encoder == TextEncoder::None && !include_metadata) {
    throw UsageError("text encoder 'none' requires metadata features");
  }
  if (finetune_epochs < 0) throw UsageError("fine-tuning epochs must be non-negative");
}

PreparedDataset::PreparedDataset(ProjectDataset dataset, const NormalizationConfig& normalization)
    : dataset_(std::move(dataset)), tokens_(preprocess_issues(dataset_.issues, normalization)) {
  for (std::size_t i = 0; i < dataset_.issues.size(); ++i) position_.emplace(dataset_.issues[i].id, i);
}

std::size_t PreparedDataset::issue_position(const std::string& id) const {
  auto it = position_.find(id);
  if (it == position_.end()) throw Error("unknown issue '" + id + "'");
  return it->second;
}

std::vector<std::size_t> PreparedDataset::endpoint_issues(const std::vector<std::size_t>& link_indices) const {
  std::vector<std::size_t> out;
  out.reserve(2 * link_indices.size());
  for (auto li : link_indices) {
    const auto& link = dataset_.links.at(li);
    out.push_back(issue_position(link.source));
    out.push_back(issue_position(link.target));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int FittedEncoders::text_width() const {
  switch (config.text_encoder) {
    case TextEncoder::Tfidf:
      return 2 * tfidf->size();
    case TextEncoder::Embedding:
      return embeddings->dims();
    case TextEncoder::None:
      return 0;
  }
  return 0;
}

int FittedEncoders::width() const {
  return 2 * text_width() + (metadata ? metadata->width() : 0);
}

FittedEncoders fit_encoders(const LinkFeatureConfig& config, const PreparedDataset& data,
                            const std::vector<std::size_t>& train_links,
                            std::shared_ptr<const EmbeddingModel> base_embeddings, std::uint64_t seed) {
  config.validate();
  if (train_links.empty()) throw Error("cannot fit encoders without training links");
  FittedEncoders enc;
  enc.config = config;

  const auto issue_positions = data.endpoint_issues(train_links);
  std::vector<TokenizedIssue> corpus;
  corpus.reserve(issue_positions.size());
  for (auto p : issue_positions) {
    corpus.push_back(data.tokens()[p]);
    enc.fit_issue_ids.push_back(data.dataset().issues[p].id);
  }

  switch (config.text_encoder) {
    case TextEncoder::Tfidf:
      enc.tfidf = fit_tfidf(corpus);
      break;
    case TextEncoder::Embedding:
      if (!base_embeddings) throw UsageError("embedding encoder requires an embedding model (--embeddings)");
      if (config.finetune_epochs > 0) {
        enc.embeddings = std::make_shared<const EmbeddingModel>(
            finetune_embeddings(*base_embeddings, corpus, config.finetune_epochs, seed));
      } else {
        enc.embeddings = std::move(base_embeddings);
      }
      break;
    case TextEncoder::None:
      break;
  }

  if (config.include_metadata) {
    std::vector<IssueLink> links;
    links.reserve(train_links.size());
    for (auto li : train_links) links.push_back(data.dataset().links.at(li));
    enc.metadata = fit_metadata_registry(links, data.dataset());
  }
  return enc;
}

FeatureVector encode_issue_text(const FittedEncoders& encoders, const TokenizedIssue& issue) {
  switch (encoders.config.text_encoder) {
    case TextEncoder::Tfidf:
      return encode_issue_tfidf(*encoders.tfidf, issue);
    case TextEncoder::Embedding:
      return encode_issue_embedding(*encoders.embeddings, issue);
    case TextEncoder::None:
      break;
  }
  return {};
}

FeatureVector encode_link(const FittedEncoders& encoders, const Issue& source, const TokenizedIssue& source_tokens,
                          const Issue& target, const TokenizedIssue& target_tokens) {
  const int text = encoders.text_width();
  FeatureVector out(encoders.width());
  if (text > 0) {
    out.segment(0, text) = encode_issue_text(encoders, source_tokens);
    out.segment(text, text) = encode_issue_text(encoders, target_tokens);
  }
  if (encoders.metadata) out.tail(encoders.metadata->width()) = encode_metadata(*encoders.metadata, source, target);
  return out;
}

FeatureMatrix encode_links(const FittedEncoders& encoders, const PreparedDataset& data,
                           const std::vector<std::size_t>& link_indices) {
  FeatureMatrix X(static_cast<Eigen::Index>(link_indices.size()), encoders.width());
  for (std::size_t r = 0; r < link_indices.size(); ++r) {
    const auto& link = data.dataset().links.at(link_indices[r]);
    X.row(static_cast<Eigen::Index>(r)) =
        encode_link(encoders, data.issue(link.source), data.issue_tokens(link.source), data.issue(link.target),
                    data.issue_tokens(link.target))
            .transpose();
  }
  return X;
}

}  // namespace linklab
