#include "linklab/embeddings.hpp"

#include "linklab/log.hpp"
#include "linklab/math.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

namespace linklab {

namespace {

constexpr std::size_t kNegativeTableSize = 1'000'000;

std::uint32_t fnv1a(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (char c : s) {
    h ^= static_cast<std::uint32_t>(static_cast<std::int8_t>(c));
    h *= 16777619u;
  }
  return h;
}

void init_uniform(RowMatrix<float>& m, int dims, std::mt19937_64& rng) {
  std::uniform_real_distribution<float> dist(-1.0f / static_cast<float>(dims), 1.0f / static_cast<float>(dims));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
}

}  // namespace

EmbeddingModel::EmbeddingModel(int dims, std::int64_t bucket_count, int min_ngram, int max_ngram)
    : dims_(dims), bucket_count_(bucket_count), min_ngram_(min_ngram), max_ngram_(max_ngram) {
  if (dims < 1) throw Error("embedding dims must be positive");
  if (bucket_count < 0) throw Error("bucket count must be non-negative");
  word_in_.resize(0, dims);
  word_out_.resize(0, dims);
  bucket_in_ = RowMatrix<float>::Zero(bucket_count, dims);
}

std::vector<std::int64_t> EmbeddingModel::subword_buckets(const std::string& word) const {
  std::vector<std::int64_t> out;
  if (bucket_count_ == 0) return out;
  const std::string wrapped = "<" + word + ">";
  const auto len = static_cast<int>(wrapped.size());
  for (int start = 0; start < len; ++start) {
    for (int n = min_ngram_; n <= max_ngram_ && start + n <= len; ++n) {
      out.push_back(static_cast<std::int64_t>(fnv1a(std::string_view(wrapped).substr(start, n)) %
                                              static_cast<std::uint64_t>(bucket_count_)));
    }
  }
  return out;
}

int EmbeddingModel::add_word(const std::string& word, std::int64_t count) {
  const int id = static_cast<int>(words_.size());
  words_.push_back(word);
  counts_.push_back(count);
  index_.emplace(word, id);
  word_buckets_.push_back(subword_buckets(word));
  return id;
}

void EmbeddingModel::grow_rows() {
  const auto old_rows = word_in_.rows();
  const auto rows = static_cast<Eigen::Index>(words_.size());
  if (rows == old_rows) return;
  word_in_.conservativeResize(rows, dims_);
  word_out_.conservativeResize(rows, dims_);
  word_in_.bottomRows(rows - old_rows).setZero();
  word_out_.bottomRows(rows - old_rows).setZero();
}

std::optional<int> EmbeddingModel::id_of(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<FeatureVector> EmbeddingModel::word_vector(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  const int id = it->second;
  Vector<float> v = word_in_.row(id).transpose();
  const auto& buckets = word_buckets_[static_cast<std::size_t>(id)];
  for (auto b : buckets) v += bucket_in_.row(b).transpose();
  v /= static_cast<float>(1 + buckets.size());
  return v.cast<double>();
}

bool EmbeddingModel::operator==(const EmbeddingModel& o) const {
  return dims_ == o.dims_ && bucket_count_ == o.bucket_count_ && min_ngram_ == o.min_ngram_ &&
         max_ngram_ == o.max_ngram_ && words_ == o.words_ && counts_ == o.counts_ && same_matrix(word_in_, o.word_in_) &&
         same_matrix(bucket_in_, o.bucket_in_) && same_matrix(word_out_, o.word_out_);
}

void EmbeddingModel::save_text(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write embeddings '" + path.string() + "'");
  out << words_.size() << ' ' << dims_ << '\n';
  out.precision(9);
  for (const auto& w : words_) {
    const FeatureVector v = *word_vector(w);
    out << w;
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << static_cast<float>(v[i]);
    out << '\n';
  }
  if (!out) throw Error("I/O error writing '" + path.string() + "'");
}

EmbeddingModel EmbeddingModel::load_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embeddings '" + path.string() + "'");
  std::size_t vocab = 0;
  int dims = 0;
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  if (!(hs >> vocab >> dims) || dims < 1) throw Error("embedding file '" + path.string() + "': bad header");
  EmbeddingModel model(dims, 0, 3, 6);
  model.word_in_.resize(static_cast<Eigen::Index>(vocab), dims);
  std::string line;
  for (std::size_t row = 0; row < vocab; ++row) {
    if (!std::getline(in, line)) throw Error("embedding file '" + path.string() + "': truncated");
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    Vector<float> v(dims);
    for (int d = 0; d < dims; ++d) {
      if (!(ls >> v[d])) {
        throw Error("embedding file '" + path.string() + "': bad vector on line " + std::to_string(row + 2));
      }
      if (!std::isfinite(v[d])) throw Error("embedding file '" + path.string() + "': non-finite value");
    }
    if (model.index_.contains(word)) continue;
    const int id = static_cast<int>(model.words_.size());
    model.words_.push_back(word);
    model.counts_.push_back(1);
    model.index_.emplace(word, id);
    model.word_buckets_.emplace_back();
    model.word_in_.row(id) = v.transpose();
  }
  model.word_in_.conservativeResize(static_cast<Eigen::Index>(model.words_.size()), dims);
  model.word_out_ = RowMatrix<float>::Zero(static_cast<Eigen::Index>(model.words_.size()), dims);
  return model;
}

// --- training ----------------------------------------------------------------

class SkipGramTrainer {
 public:
  struct Params {
    int epochs;
    int window;
    int negatives;
    double learning_rate;
    double subsample;
    std::uint64_t seed;
    int threads;
  };

  SkipGramTrainer(EmbeddingModel& model, Params params) : model_(model), params_(params) { build_tables(); }

  void train(const std::vector<std::vector<int>>& sentences) {
    std::int64_t tokens_per_epoch = 0;
    for (const auto& s : sentences) tokens_per_epoch += static_cast<std::int64_t>(s.size());
    const double total = static_cast<double>(tokens_per_epoch) * params_.epochs;
    if (params_.threads <= 1) {
      std::mt19937_64 rng(params_.seed);
      std::int64_t processed = 0;
      for (int epoch = 0; epoch < params_.epochs; ++epoch) {
        for (const auto& s : sentences) {
          train_sentence(model_, s, rng, processed, total);
          processed += static_cast<std::int64_t>(s.size());
        }
      }
      return;
    }
    // Parallel mode: each worker trains a replica on its shard; replicas are averaged per epoch.
    const int workers = params_.threads;
    for (int epoch = 0; epoch < params_.epochs; ++epoch) {
      std::vector<EmbeddingModel> replicas(static_cast<std::size_t>(workers), model_);
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          std::mt19937_64 rng(params_.seed + static_cast<std::uint64_t>(epoch * workers + w));
          std::int64_t processed = static_cast<std::int64_t>(epoch) * tokens_per_epoch;
          for (std::size_t i = static_cast<std::size_t>(w); i < sentences.size(); i += static_cast<std::size_t>(workers)) {
            train_sentence(replicas[static_cast<std::size_t>(w)], sentences[i], rng, processed, total);
            processed += static_cast<std::int64_t>(sentences[i].size()) * workers;
          }
        });
      }
      for (auto& t : pool) t.join();
      model_.word_in_.setZero();
      model_.word_out_.setZero();
      model_.bucket_in_.setZero();
      for (const auto& r : replicas) {
        model_.word_in_ += r.word_in_ / static_cast<float>(workers);
        model_.word_out_ += r.word_out_ / static_cast<float>(workers);
        model_.bucket_in_ += r.bucket_in_ / static_cast<float>(workers);
      }
    }
  }

 private:
  void build_tables() {
    const auto& counts = model_.counts_;
    double norm = 0.0;
    for (auto c : counts) norm += std::pow(static_cast<double>(c), 0.75);
    negative_table_.clear();
    negative_table_.reserve(kNegativeTableSize);
    for (std::size_t w = 0; w < counts.size(); ++w) {
      const double share = std::pow(static_cast<double>(counts[w]), 0.75) / norm;
      const auto slots = static_cast<std::size_t>(std::ceil(share * kNegativeTableSize));
      negative_table_.insert(negative_table_.end(), slots, static_cast<int>(w));
    }
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    keep_prob_.assign(counts.size(), 1.0);
    if (params_.subsample > 0.0) {
      for (std::size_t w = 0; w < counts.size(); ++w) {
        const double f = static_cast<double>(counts[w]) / static_cast<double>(total);
        keep_prob_[w] = std::min(1.0, std::sqrt(params_.subsample / f) + params_.subsample / f);
      }
    }
  }

  void train_sentence(EmbeddingModel& m, const std::vector<int>& sentence, std::mt19937_64& rng,
                      std::int64_t processed, double total) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> kept;
    kept.reserve(sentence.size());
    for (int w : sentence) {
      if (keep_prob_[static_cast<std::size_t>(w)] >= 1.0 || unit(rng) < keep_prob_[static_cast<std::size_t>(w)]) {
        kept.push_back(w);
      }
    }
    std::uniform_int_distribution<int> window_dist(1, params_.window);
    std::uniform_int_distribution<std::size_t> neg_dist(0, negative_table_.size() - 1);
    const auto n = static_cast<int>(kept.size());
    for (int pos = 0; pos < n; ++pos) {
      const double progress = std::min(1.0, static_cast<double>(processed + pos) / total);
      const auto lr = static_cast<float>(params_.learning_rate * (1.0 - progress));
      const int reach = window_dist(rng);
      for (int c = std::max(0, pos - reach); c <= std::min(n - 1, pos + reach); ++c) {
        if (c == pos) continue;
        update(m, kept[static_cast<std::size_t>(pos)], kept[static_cast<std::size_t>(c)], lr, rng, neg_dist);
      }
    }
  }

  void update(EmbeddingModel& m, int center, int context, float lr, std::mt19937_64& rng,
              std::uniform_int_distribution<std::size_t>& neg_dist) {
    const auto& buckets = m.word_buckets_[static_cast<std::size_t>(center)];
    const float scale = 1.0f / static_cast<float>(1 + buckets.size());
    Vector<float> hidden = m.word_in_.row(center).transpose();
    for (auto b : buckets) hidden += m.bucket_in_.row(b).transpose();
    hidden *= scale;

    Vector<float> grad = Vector<float>::Zero(m.dims_);
    auto step = [&](int target, float label) {
      auto out = m.word_out_.row(target);
      const float score = 1.0f / (1.0f + std::exp(-out.dot(hidden.transpose())));
      const float g = lr * (label - score);
      grad += g * out.transpose();
      out += g * hidden.transpose();
    };
    step(context, 1.0f);
    for (int k = 0; k < params_.negatives; ++k) {
      const int neg = negative_table_[neg_dist(rng)];
      if (neg == context) continue;
      step(neg, 0.0f);
    }
    grad *= scale;
    m.word_in_.row(center) += grad.transpose();
    for (auto b : buckets) m.bucket_in_.row(b) += grad.transpose();
  }

  EmbeddingModel& model_;
  Params params_;
  std::vector<int> negative_table_;
  std::vector<double> keep_prob_;
};

EmbeddingModel train_embeddings(const std::vector<TokenList>& sentences, const EmbeddingTrainingOptions& options) {
  if (options.dims < 2) throw Error("embedding dims must be at least 2");
  if (options.window < 1 || options.negatives < 0 || options.epochs < 0) throw Error("invalid embedding options");
  std::unordered_map<std::string, std::int64_t> freq;
  std::vector<std::string> order;
  for (const auto& s : sentences) {
    for (const auto& t : s) {
      auto [it, inserted] = freq.emplace(t, 0);
      if (inserted) order.push_back(t);
      ++it->second;
    }
  }
  // Vocabulary ordered by descending frequency, first occurrence breaking ties.
  std::vector<std::string> vocab;
  for (const auto& w : order) {
    if (freq[w] >= options.min_count) vocab.push_back(w);
  }
  if (vocab.empty()) throw Error("empty vocabulary");
  std::stable_sort(vocab.begin(), vocab.end(), [&](const auto& a, const auto& b) { return freq[a] > freq[b]; });

  EmbeddingModel model(options.dims, options.bucket_count, options.min_ngram, options.max_ngram);
  for (const auto& w : vocab) model.add_word(w, freq[w]);
  model.grow_rows();

  std::mt19937_64 init_rng(options.seed);
  init_uniform(model.word_in_, options.dims, init_rng);
  init_uniform(model.bucket_in_, options.dims, init_rng);

  std::vector<std::vector<int>> indexed(sentences.size());
  std::size_t in_vocab_tokens = 0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    for (const auto& t : sentences[i]) {
      if (auto id = model.id_of(t)) indexed[i].push_back(*id);
    }
    in_vocab_tokens += indexed[i].size();
  }
  if (in_vocab_tokens < static_cast<std::size_t>(2 * options.window + 1)) {
    throw Error("corpus smaller than one window (" + std::to_string(in_vocab_tokens) + " tokens)");
  }

  SkipGramTrainer trainer(model, {options.epochs, options.window, options.negatives, options.learning_rate,
                                  options.subsample, options.seed + 1, options.threads});
  trainer.train(indexed);
  return model;
}

EmbeddingModel train_embeddings(const std::filesystem::path& corpus, const NormalizationConfig& normalization,
                                const EmbeddingTrainingOptions& options) {
  std::ifstream in(corpus, std::ios::binary);
  if (!in) throw Error("cannot open corpus '" + corpus.string() + "'");
  std::vector<TokenList> sentences;
  for (std::string line; std::getline(in, line);) {
    auto tokens = normalize_text(line, normalization);
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
  }
  return train_embeddings(sentences, options);
}

EmbeddingModel finetune_embeddings(const EmbeddingModel& model, const std::vector<TokenizedIssue>& issues, int epochs,
                                   std::uint64_t seed, double learning_rate) {
  if (epochs < 0) throw Error("fine-tuning epochs must be non-negative");
  if (epochs == 0) return model;
  EmbeddingModel tuned = model;
  std::mt19937_64 init_rng(seed);
  std::uniform_real_distribution<float> dist(-1.0f / static_cast<float>(tuned.dims_),
                                             1.0f / static_cast<float>(tuned.dims_));
  const auto first_new = static_cast<Eigen::Index>(tuned.words_.size());
  for (const auto& issue : issues) {
    for (const auto* field : {&issue.summary_tokens, &issue.description_tokens}) {
      for (const auto& t : *field) {
        if (!tuned.index_.contains(t)) tuned.add_word(t, 0);
      }
    }
  }
  tuned.grow_rows();
  for (Eigen::Index r = first_new; r < tuned.word_in_.rows(); ++r) {
    for (int d = 0; d < tuned.dims_; ++d) tuned.word_in_(r, d) = dist(init_rng);
  }
  std::vector<std::vector<int>> sentences;
  sentences.reserve(issues.size());
  for (const auto& issue : issues) {
    std::vector<int> ids;
    for (const auto* field : {&issue.summary_tokens, &issue.description_tokens}) {
      for (const auto& t : *field) {
        const int id = tuned.index_.at(t);
        ++tuned.counts_[static_cast<std::size_t>(id)];
        ids.push_back(id);
      }
    }
    if (!ids.empty()) sentences.push_back(std::move(ids));
  }
  if (sentences.empty()) return tuned;
  SkipGramTrainer trainer(tuned, {epochs, 5, 5, learning_rate, 0.0, seed + 1, 1});
  trainer.train(sentences);
  return tuned;
}

FeatureVector encode_issue_embedding(const EmbeddingModel& model, const TokenizedIssue& issue) {
  FeatureVector sum = FeatureVector::Zero(model.dims());
  int n = 0;
  for (const auto* field : {&issue.summary_tokens, &issue.description_tokens}) {
    for (const auto& t : *field) {
      if (auto v = model.word_vector(t)) {
        sum += *v;
        ++n;
      }
    }
  }
  if (n > 0) sum /= static_cast<double>(n);
  return sum;
}

}  // namespace linklab
