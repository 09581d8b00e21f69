#pragma once

#include "linklab/textprep.hpp"
#include "linklab/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace linklab {

struct EmbeddingTrainingOptions {
  int dims = 300;
  int epochs = 5;
  int window = 5;
  int negatives = 5;
  int min_count = 5;
  int min_ngram = 3;
  int max_ngram = 6;
  std::int64_t bucket_count = 2'000'000;
  double learning_rate = 0.05;
  /// Frequent-word subsampling threshold; 0 disables it.
  double subsample = 0.0;
  std::uint64_t seed = 1;
  /// >1 enables lock-free parallel updates; results then depend on scheduling.
  int threads = 1;
};

/// Skip-gram embedding table with hashed character n-gram buckets. The vector
/// of a vocabulary word is the mean of its own row and its n-gram bucket rows.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(int dims, std::int64_t bucket_count, int min_ngram, int max_ngram);

  int dims() const { return dims_; }
  std::int64_t bucket_count() const { return bucket_count_; }
  std::size_t vocabulary_size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  bool contains(const std::string& word) const { return index_.contains(word); }

  /// Composed vector of an in-vocabulary word; nullopt for OOV tokens.
  std::optional<FeatureVector> word_vector(const std::string& word) const;

  /// Word2vec text export of the composed vectors.
  void save_text(const std::filesystem::path& path) const;
  /// Loads word2vec text vectors. The loaded model has no subword buckets.
  static EmbeddingModel load_text(const std::filesystem::path& path);

  bool operator==(const EmbeddingModel& other) const;

 private:
  friend class SkipGramTrainer;
  friend EmbeddingModel train_embeddings(const std::vector<TokenList>&, const EmbeddingTrainingOptions&);
  friend EmbeddingModel finetune_embeddings(const EmbeddingModel&, const std::vector<TokenizedIssue>&, int,
                                            std::uint64_t, double);

  /// Registers a word; call grow_rows() afterwards to size the tables.
  int add_word(const std::string& word, std::int64_t count);
  void grow_rows();
  std::optional<int> id_of(const std::string& word) const;
  std::vector<std::int64_t> subword_buckets(const std::string& word) const;

  int dims_ = 0;
  std::int64_t bucket_count_ = 0;
  int min_ngram_ = 3;
  int max_ngram_ = 6;
  std::vector<std::string> words_;
  std::vector<std::int64_t> counts_;
  std::unordered_map<std::string, int> index_;
  RowMatrix<float> word_in_;    // words x dims
  RowMatrix<float> bucket_in_;  // buckets x dims
  RowMatrix<float> word_out_;   // words x dims (context vectors)
  std::vector<std::vector<std::int64_t>> word_buckets_;
};

/// Trains from tokenised sentences. Errors: "empty vocabulary" when min_count
/// filters every token, and a too-small-corpus error when fewer tokens than one
/// window remain.
EmbeddingModel train_embeddings(const std::vector<TokenList>& sentences, const EmbeddingTrainingOptions& options);

/// Reads a UTF-8 text corpus (one sentence per line), normalises each line and trains.
EmbeddingModel train_embeddings(const std::filesystem::path& corpus, const NormalizationConfig& normalization,
                                const EmbeddingTrainingOptions& options);

/// Continues the skip-gram objective on issue text (summary followed by
/// description per issue). New tokens join the vocabulary. Zero epochs is a no-op.
EmbeddingModel finetune_embeddings(const EmbeddingModel& model, const std::vector<TokenizedIssue>& issues, int epochs,
                                   std::uint64_t seed, double learning_rate = 0.05);

/// Bag of vectors: mean over in-vocabulary tokens of summary then description.
/// OOV tokens are skipped; an issue without known tokens maps to zeros.
FeatureVector encode_issue_embedding(const EmbeddingModel& model, const TokenizedIssue& issue);

}  // namespace linklab
