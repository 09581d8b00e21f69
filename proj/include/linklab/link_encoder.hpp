#pragma once

#include "linklab/dataset.hpp"
#include "linklab/embeddings.hpp"
#include "linklab/metadata.hpp"
#include "linklab/textprep.hpp"
#include "linklab/tfidf.hpp"

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace linklab {

enum class TextEncoder { Tfidf, Embedding, None };

std::string to_string(TextEncoder e);
/// Accepts tfidf, embedding, none, and the embedding corpus aliases wiki, stack, proj.
TextEncoder parse_text_encoder(const std::string& name);

struct LinkFeatureConfig {
  TextEncoder text_encoder = TextEncoder::Tfidf;
  /// Free-form tag naming the embedding corpus (wiki, stack, proj, or a path).
  std::string embedding_source;
  bool include_metadata = false;
  /// Epochs of skip-gram fine-tuning on training-issue text; 0 keeps vectors frozen.
  int finetune_epochs = 1;

  /// Throws UsageError for the text-free, metadata-free combination.
  void validate() const;
};

/// Dataset plus its tokenised issues, indexed by issue id.
class PreparedDataset {
 public:
  PreparedDataset(ProjectDataset dataset, const NormalizationConfig& normalization);

  const ProjectDataset& dataset() const { return dataset_; }
  const std::vector<TokenizedIssue>& tokens() const { return tokens_; }
  std::size_t issue_position(const std::string& id) const;
  const Issue& issue(const std::string& id) const { return dataset_.issues[issue_position(id)]; }
  const TokenizedIssue& issue_tokens(const std::string& id) const { return tokens_[issue_position(id)]; }

  /// Issue positions touched by the given links, ascending and unique.
  std::vector<std::size_t> endpoint_issues(const std::vector<std::size_t>& link_indices) const;

 private:
  ProjectDataset dataset_;
  std::vector<TokenizedIssue> tokens_;
  std::unordered_map<std::string, std::size_t> position_;
};

/// Fitted text and metadata encoders for one feature configuration.
struct FittedEncoders {
  LinkFeatureConfig config;
  std::optional<TfidfModel> tfidf;
  std::shared_ptr<const EmbeddingModel> embeddings;
  std::optional<MetadataRegistry> metadata;
  /// Issues whose text or metadata shaped the fitted state.
  std::vector<std::string> fit_issue_ids;

  int text_width() const;
  int width() const;
};

/// Fits every encoder the configuration needs on the issues of the training
/// links only. `base_embeddings` is required for the embedding encoder.
FittedEncoders fit_encoders(const LinkFeatureConfig& config, const PreparedDataset& data,
                            const std::vector<std::size_t>& train_links,
                            std::shared_ptr<const EmbeddingModel> base_embeddings, std::uint64_t seed);

/// Text encoding of a single issue under the fitted encoders (2N for tfidf, dims for embeddings).
FeatureVector encode_issue_text(const FittedEncoders& encoders, const TokenizedIssue& issue);

/// [text(source) ++ text(target)] ++ [metadata when enabled].
FeatureVector encode_link(const FittedEncoders& encoders, const Issue& source, const TokenizedIssue& source_tokens,
                          const Issue& target, const TokenizedIssue& target_tokens);

/// One row per requested link.
FeatureMatrix encode_links(const FittedEncoders& encoders, const PreparedDataset& data,
                           const std::vector<std::size_t>& link_indices);

}  // namespace linklab
