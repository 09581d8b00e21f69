#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "linklab/embeddings.hpp"
#include "linklab/link_encoder.hpp"
#include "linklab/metadata.hpp"
#include "linklab/tfidf.hpp"

#include <fstream>
#include <random>

using namespace linklab;

namespace {

TokenizedIssue tokens(const std::string& id, TokenList summary, TokenList description = {}) {
  return {id, std::move(summary), std::move(description)};
}

/// Tiny word2vec file with the given rows.
std::shared_ptr<const EmbeddingModel> vectors(const testing::TempDir& dir,
                                              const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
  std::ofstream out(dir / "v.vec");
  out << rows.size() << ' ' << rows.front().second.size() << '\n';
  for (const auto& [w, v] : rows) {
    out << w;
    for (double x : v) out << ' ' << x;
    out << '\n';
  }
  out.close();
  return std::make_shared<const EmbeddingModel>(EmbeddingModel::load_text(dir / "v.vec"));
}

double cosine(const FeatureVector& a, const FeatureVector& b) { return a.dot(b) / (a.norm() * b.norm()); }

}  // namespace

TEST_CASE("fit_tfidf counts two documents per issue") {
  const auto model = fit_tfidf({tokens("A", {"a", "b"}, {"a", "c"}), tokens("B", {"b"})});
  CHECK(model.n_documents == 4);
  CHECK(model.size() == 3);
  CHECK(model.doc_frequency[static_cast<std::size_t>(model.vocabulary.at("a"))] == 2);
  CHECK(model.doc_frequency[static_cast<std::size_t>(model.vocabulary.at("b"))] == 2);
  CHECK(model.doc_frequency[static_cast<std::size_t>(model.vocabulary.at("c"))] == 1);
  CHECK_THROWS_AS(fit_tfidf({}), Error);
}

TEST_CASE("TF-IDF worked example") {
  // One issue: summary "a b" and description "a c" are the two documents.
  const auto issue = tokens("A", {"a", "b"}, {"a", "c"});
  const auto model = fit_tfidf({issue});
  CHECK(model.idf(model.vocabulary.at("a")) == doctest::Approx(1.0));
  CHECK(model.idf(model.vocabulary.at("b")) == doctest::Approx(std::log(1.5) + 1.0));
  const FeatureVector v = encode_issue_tfidf(model, issue);
  REQUIRE(v.size() == 6);
  CHECK(v[model.vocabulary.at("a")] == doctest::Approx(0.5797).epsilon(1e-4));
  CHECK(v[model.vocabulary.at("b")] == doctest::Approx(0.8148).epsilon(1e-4));
  CHECK(v[model.vocabulary.at("c")] == 0.0);
}

TEST_CASE("TF-IDF halves") {
  const auto model = fit_tfidf({tokens("A", {"x", "y"}, {"y", "z"})});
  const FeatureVector empty_summary = encode_issue_tfidf(model, tokens("B", {}, {"y"}));
  CHECK(empty_summary.head(3).isZero());
  const FeatureVector one = encode_issue_tfidf(model, tokens("C", {"z", "unknown"}));
  CHECK(one.head(3).norm() == doctest::Approx(1.0));
  CHECK(one[model.vocabulary.at("z")] == doctest::Approx(1.0));
}

TEST_CASE("TF-IDF matches the direct oracle on random corpora") {
  std::mt19937_64 rng(5);
  const TokenList alphabet{"a", "b", "c", "d", "e", "f", "g"};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TokenizedIssue> corpus;
    std::vector<TokenList> docs;
    auto doc = [&] {
      TokenList d;
      const int len = std::uniform_int_distribution<int>(0, 6)(rng);
      for (int i = 0; i < len; ++i) d.push_back(alphabet[std::uniform_int_distribution<std::size_t>(0, 6)(rng)]);
      return d;
    };
    for (int i = 0; i < 4; ++i) {
      corpus.push_back(tokens(std::to_string(i), doc(), doc()));
      docs.push_back(corpus.back().summary_tokens);
      docs.push_back(corpus.back().description_tokens);
    }
    const auto model = fit_tfidf(corpus);
    for (const auto& issue : corpus) {
      const FeatureVector v = encode_issue_tfidf(model, issue);
      const auto n = static_cast<Eigen::Index>(model.size());
      for (int half = 0; half < 2; ++half) {
        const auto expected = oracle::tfidf_document(docs, half == 0 ? issue.summary_tokens : issue.description_tokens);
        for (const auto& [token, index] : model.vocabulary) {
          const double want = expected.count(token) ? expected.at(token) : 0.0;
          CHECK(std::abs(v[half * n + index] - want) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("metadata registry and encoding") {
  ProjectDataset d;
  d.issues = {testing::make_issue("P-1", 0, "Bug"), testing::make_issue("P-2", 1, "Task"),
              testing::make_issue("P-3", 4, "Task"), testing::make_issue("P-4", 9, "Epic")};
  d.issues[0].assignee = "ann";
  const std::vector<IssueLink> train{{"P-1", "P-2", "blocks"}, {"P-2", "P-3", "relates to"}};
  const auto reg = fit_metadata_registry(train, d);
  CHECK(reg.type_index.width() == 3);
  CHECK(reg.time_delta_mean == doctest::Approx(2.0));
  CHECK(reg.time_delta_std == doctest::Approx(1.0));
  CHECK(reg.width() == 1 + 2 * (3 + reg.assignee_index.width() + reg.reporter_index.width()));

  const FeatureVector v = encode_metadata(reg, d.issues[0], d.issues[2]);
  CHECK(v.size() == reg.width());
  CHECK(v[0] == doctest::Approx((4.0 - 2.0) / 1.0));
  const int block = reg.type_index.width() + reg.assignee_index.width() + reg.reporter_index.width();
  CHECK(v.segment(1, 3) == Eigen::Vector3d(0, 1, 0));
  CHECK(v.segment(1 + block, 3) == Eigen::Vector3d(0, 0, 1));

  // Types and people never seen in training map to the unknown slot.
  const FeatureVector epic = encode_metadata(reg, d.issues[3], d.issues[3]);
  CHECK(epic[1] == 1.0);
  CHECK(reg.assignee_index.index_of(std::string("zed")) == 0);
  CHECK(reg.assignee_index.index_of(std::nullopt) == 0);

  SUBCASE("zero spread gives a zero delta") {
    const auto flat = fit_metadata_registry({{"P-1", "P-2", "blocks"}}, d);
    CHECK(flat.time_delta_std == 0.0);
    CHECK(encode_metadata(flat, d.issues[0], d.issues[3])[0] == 0.0);
  }
  SUBCASE("normalised delta") {
    CHECK(encode_metadata(reg, d.issues[1], d.issues[2])[0] == doctest::Approx(1.0));
    CHECK(encode_metadata(reg, d.issues[0], d.issues[0])[0] == doctest::Approx(-2.0));
    Issue later = d.issues[0];
    later.created += std::chrono::days(2);
    CHECK(encode_metadata(reg, d.issues[0], later)[0] == doctest::Approx(0.0));
  }
}

TEST_CASE("bag of vectors") {
  testing::TempDir dir;
  const auto model = vectors(dir, {{"a", {1, 0}}, {"b", {0, 1}}});
  CHECK(encode_issue_embedding(*model, tokens("X", {"a"})).isApprox(Eigen::Vector2d(1, 0)));
  CHECK(encode_issue_embedding(*model, tokens("X", {"a"}, {"b"})).isApprox(Eigen::Vector2d(0.5, 0.5)));
  CHECK(encode_issue_embedding(*model, tokens("X", {"zz"}, {"qq"})).isZero());
  CHECK(encode_issue_embedding(*model, tokens("X", {"a", "zz"})).isApprox(Eigen::Vector2d(1, 0)));
}

TEST_CASE("embedding training") {
  const std::vector<TokenList> corpus = [] {
    std::vector<TokenList> s;
    for (int i = 0; i < 60; ++i) {
      s.push_back({"king", "queen", "royal", "crown", "palace"});
      s.push_back({"engine", "wheel", "brake", "piston", "motor"});
    }
    return s;
  }();
  EmbeddingTrainingOptions o;
  o.dims = 16;
  o.min_count = 1;
  o.bucket_count = 5000;
  o.epochs = 10;
  o.seed = 3;
  const auto m = train_embeddings(corpus, o);
  CHECK(m.dims() == 16);
  CHECK(m.vocabulary_size() == 10);
  const auto king = *m.word_vector("king");
  CHECK(cosine(king, *m.word_vector("queen")) > cosine(king, *m.word_vector("piston")));
  CHECK_FALSE(m.word_vector("absent").has_value());
  CHECK(train_embeddings(corpus, o) == m);

  SUBCASE("errors") {
    auto big = o;
    big.min_count = 1000;
    CHECK_THROWS_WITH_AS(train_embeddings(corpus, big), doctest::Contains("empty vocabulary"), Error);
    CHECK_THROWS_AS(train_embeddings(std::vector<TokenList>{{"a", "b"}}, o), Error);
  }
  SUBCASE("fine-tuning") {
    const std::vector<TokenizedIssue> issues{tokens("I-1", {"king", "gearbox"}, {"queen", "gearbox", "crown"})};
    CHECK(finetune_embeddings(m, issues, 0, 1) == m);
    const auto tuned = finetune_embeddings(m, issues, 2, 1);
    CHECK(tuned.dims() == 16);
    CHECK(tuned.contains("gearbox"));
    CHECK(tuned.word_vector("gearbox")->allFinite());
    CHECK_FALSE(m.contains("gearbox"));
  }
  SUBCASE("text round trip keeps composed vectors") {
    testing::TempDir dir;
    m.save_text(dir / "m.vec");
    const auto loaded = EmbeddingModel::load_text(dir / "m.vec");
    CHECK(loaded.vocabulary_size() == m.vocabulary_size());
    CHECK(loaded.word_vector("royal")->isApprox(*m.word_vector("royal"), 1e-5));
  }
}

TEST_CASE("link encoding") {
  ProjectDataset d;
  d.project = "P";
  d.issues = {testing::make_issue("P-1", 0, "Bug", "alpha beta", "gamma"), testing::make_issue("P-2", 2, "Task", "beta"),
              testing::make_issue("P-3", 5, "Bug", "delta")};
  d.links = {{"P-1", "P-2", "blocks"}, {"P-2", "P-3", "relates to"}};
  const PreparedDataset data(d, NormalizationConfig::from_text("", ""));

  LinkFeatureConfig text_only;
  auto enc = fit_encoders(text_only, data, {0}, nullptr, 1);
  CHECK(enc.tfidf->size() == 3);
  CHECK(enc.width() == 12);
  CHECK(enc.fit_issue_ids == std::vector<std::string>{"P-1", "P-2"});
  const FeatureMatrix X = encode_links(enc, data, {0, 1});
  CHECK(X.rows() == 2);
  CHECK(X.cols() == 12);
  CHECK(X.row(1).segment(6, 6).isZero());  // "delta" is not in the training vocabulary

  LinkFeatureConfig meta_only;
  meta_only.text_encoder = TextEncoder::None;
  meta_only.include_metadata = true;
  enc = fit_encoders(meta_only, data, {0, 1}, nullptr, 1);
  const FeatureVector v = encode_link(enc, d.issues[0], data.tokens()[0], d.issues[1], data.tokens()[1]);
  CHECK(v == encode_metadata(*enc.metadata, d.issues[0], d.issues[1]));

  LinkFeatureConfig nothing;
  nothing.text_encoder = TextEncoder::None;
  CHECK_THROWS_AS(nothing.validate(), UsageError);
  LinkFeatureConfig emb;
  emb.text_encoder = TextEncoder::Embedding;
  CHECK_THROWS_AS(fit_encoders(emb, data, {0}, nullptr, 1), Error);

  testing::TempDir dir;
  emb.include_metadata = true;
  emb.finetune_epochs = 0;
  const auto base = vectors(dir, {{"alpha", std::vector<double>(300, 0.1)}, {"beta", std::vector<double>(300, 0.2)}});
  enc = fit_encoders(emb, data, {0}, base, 1);
  CHECK(enc.width() == 600 + enc.metadata->width());
  CHECK(parse_text_encoder("wiki") == TextEncoder::Embedding);
  CHECK_THROWS_AS(parse_text_encoder("bert"), UsageError);
}
