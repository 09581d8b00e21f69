#include "doctest.h"
#include "oracles.hpp"

#include "linklab/classifier.hpp"
#include "linklab/forest.hpp"
#include "linklab/logistic.hpp"
#include "linklab/neural_net.hpp"
#include "linklab/serialize.hpp"
#include "linklab/smote.hpp"
#include "linklab/tuning.hpp"

#include <random>

using namespace linklab;

namespace {

/// Two Gaussian blobs around (-2, -2) and (2, 2).
std::pair<FeatureMatrix, LabelList> blobs(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.5);
  FeatureMatrix X(n, 2);
  LabelList y;
  for (int i = 0; i < n; ++i) {
    const double c = i % 2 == 0 ? -2.0 : 2.0;
    X(i, 0) = c + noise(rng);
    X(i, 1) = c + noise(rng);
    y.push_back(i % 2 == 0 ? "neg" : "pos");
  }
  return {X, y};
}

double accuracy(const LabelList& a, const LabelList& b) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < a.size(); ++i) hits += a[i] == b[i];
  return static_cast<double>(hits) / static_cast<double>(a.size());
}

ClassifierSpec spec_for(ModelKind kind, std::uint64_t seed = 0) {
  return default_config(HyperParamSpace::standard(), kind, false, seed);
}

}  // namespace

TEST_CASE("SMOTE examples") {
  SUBCASE("two minority points give a point between them") {
    FeatureMatrix X(5, 2);
    X << 0, 0, 1, 0, 5, 5, 5, 6, 6, 5;
    const ClassCodes y{0, 0, 1, 1, 1};
    const auto out = smote_oversample(X, y, 1, 3);
    REQUIRE(out.X.rows() == 6);
    CHECK(out.y[5] == 0);
    CHECK(out.X(5, 1) == 0.0);
    CHECK(out.X(5, 0) >= 0.0);
    CHECK(out.X(5, 0) <= 1.0);
    CHECK(oracle::check_smote(X, y, 1, out).empty());
  }
  SUBCASE("balanced input is unchanged") {
    FeatureMatrix X(4, 1);
    X << 1, 2, 3, 4;
    const ClassCodes y{0, 1, 0, 1};
    const auto out = smote_oversample(X, y, 3, 1);
    CHECK(out.X == X);
    CHECK(out.y == y);
    CHECK(out.origins.empty());
  }
  SUBCASE("identical minority points") {
    FeatureMatrix X(5, 2);
    X << 2, 3, 2, 3, 0, 0, 1, 1, 2, 2;
    const ClassCodes y{1, 1, 0, 0, 0};
    const auto out = smote_oversample(X, y, 1, 9);
    REQUIRE(out.X.rows() == 6);
    CHECK(out.X.row(5) == X.row(0));
  }
  SUBCASE("singleton class is duplicated") {
    FeatureMatrix X(4, 1);
    X << 7, 1, 2, 3;
    const ClassCodes y{1, 0, 0, 0};
    const auto out = smote_oversample(X, y, 5, 2);
    CHECK(out.X.rows() == 6);
    CHECK(out.X(4, 0) == 7.0);
    CHECK(out.X(5, 0) == 7.0);
  }
  SUBCASE("k must be positive") {
    FeatureMatrix X = FeatureMatrix::Zero(2, 1);
    CHECK_THROWS_AS(smote_oversample(X, {0, 1}, 0, 1), Error);
  }
  SUBCASE("deterministic per seed") {
    FeatureMatrix X = FeatureMatrix::Random(30, 3);
    ClassCodes y(30, 0);
    for (int i = 0; i < 8; ++i) y[static_cast<std::size_t>(i)] = 1;
    const auto a = smote_oversample(X, y, 3, 4), b = smote_oversample(X, y, 3, 4);
    CHECK(a.X == b.X);
    CHECK(oracle::check_smote(X, y, 3, a).empty());
  }
}

TEST_CASE("ZeroR") {
  const auto m = train_zeror({"A", "A", "B"}, 2);
  CHECK(m.predict(FeatureMatrix::Random(3, 2)) == LabelList{"A", "A", "A"});
  const FeatureMatrix p = m.predict_proba(FeatureMatrix::Zero(1, 2));
  CHECK(p(0, 0) == 1.0);
  CHECK(p(0, 1) == 0.0);
  CHECK(train_zeror({"B", "A"}).predict(FeatureMatrix::Zero(1, 0)) == LabelList{"A"});
  CHECK_THROWS_AS(train_zeror({}), Error);

  LabelList flex;
  for (auto [label, n] : std::vector<std::pair<std::string, int>>{
           {"relates to", 94}, {"duplicates", 51}, {"is a clone of", 23}, {"blocks", 20}, {"requires", 20}}) {
    flex.insert(flex.end(), static_cast<std::size_t>(n), label);
  }
  const auto zr = train_zeror(flex);
  const auto pred = zr.predict(FeatureMatrix::Zero(static_cast<Eigen::Index>(flex.size()), 0));
  CHECK(weighted_f1(flex, pred).weighted_f1 == doctest::Approx(0.281).epsilon(5e-4 / 0.281));
}

TEST_CASE("logistic regression") {
  SUBCASE("separable blobs") {
    const auto [X, y] = blobs(20, 1);
    const auto m = train_classifier(spec_for(ModelKind::LogisticRegression), X, y);
    CHECK(accuracy(m.predict(X), y) == 1.0);
    const FeatureMatrix p = m.predict_proba(X);
    CHECK((p.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-6);
  }
  SUBCASE("objective never increases") {
    const auto [X, y] = blobs(30, 2);
    const auto [labels, codes] = encode_labels(y);
    LogisticTrace trace;
    train_logistic_regression(X, codes, 2, {}, &trace);
    REQUIRE(trace.losses.size() >= 2);
    for (std::size_t i = 1; i < trace.losses.size(); ++i) CHECK(trace.losses[i] <= trace.losses[i - 1] + 1e-15);
  }
  SUBCASE("weaker regularisation grows the weights") {
    FeatureMatrix X(4, 2);
    X << 0, 1, 1, 0, 1, 1, 0, 0.2;
    const ClassCodes y{0, 1, 1, 0};
    LogisticOptions strong, weak;
    weak.C = 1e4;
    CHECK(train_logistic_regression(X, y, 2, weak).weights.norm() >=
          train_logistic_regression(X, y, 2, strong).weights.norm());
  }
  SUBCASE("gradient matches finite differences") {
    std::mt19937_64 rng(8);
    FeatureMatrix X = FeatureMatrix::Random(10, 8);
    ClassCodes y;
    for (int i = 0; i < 10; ++i) y.push_back(i % 3);
    SoftmaxRegression<double> m{Eigen::MatrixXd::Random(8, 3), Eigen::VectorXd::Random(3)};
    Eigen::MatrixXd gw;
    Eigen::VectorXd gb;
    logistic_objective(m, X, y, 0.5, &gw, &gb);
    auto f = [&] { return logistic_objective(m, X, y, 0.5); };
    CHECK(oracle::relative_error(gw, oracle::numeric_gradient(m.weights, f)) <= 1e-5);
    CHECK(oracle::relative_error(gb, oracle::numeric_gradient(m.bias, f)) <= 1e-5);
  }
  SUBCASE("non-finite features") {
    FeatureMatrix X = FeatureMatrix::Zero(2, 1);
    X(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(train_classifier(spec_for(ModelKind::LogisticRegression), X, {"a", "b"}), Error);
  }
}

TEST_CASE("random forest") {
  SUBCASE("a single full tree shatters XOR") {
    FeatureMatrix X(4, 2);
    X << 0, 0, 0, 1, 1, 0, 1, 1;
    const LabelList y{"a", "b", "b", "a"};
    auto spec = spec_for(ModelKind::RandomForest);
    spec.hyper_params["RF_e"] = 1.0;
    spec.forest_bootstrap = false;
    spec.forest_max_features_override = "all";
    const auto m = train_classifier(spec, X, y);
    CHECK(m.predict(X) == y);
  }
  SUBCASE("ensemble of one equals the plain tree") {
    const FeatureMatrix X = FeatureMatrix::Random(40, 5);
    ClassCodes y;
    for (int i = 0; i < 40; ++i) y.push_back(i % 3);
    ForestOptions o;
    o.n_estimators = 1;
    o.bootstrap = false;
    o.max_features = MaxFeatures::All;
    o.seed = 12;
    const auto forest = train_random_forest(X, y, 3, o);
    std::vector<Eigen::Index> rows(40);
    std::iota(rows.begin(), rows.end(), 0);
    const auto tree = train_decision_tree(X, y, 3, rows, 5, forest.tree_seeds[0]);
    CHECK(forest.trees[0] == tree);
    const FeatureMatrix probe = FeatureMatrix::Random(50, 5);
    const FeatureMatrix p = forest.predict_proba(probe);
    for (Eigen::Index i = 0; i < probe.rows(); ++i) {
      const auto& dist = tree.leaf_distribution(probe.row(i));
      for (int c = 0; c < 3; ++c) CHECK(p(i, c) == dist[static_cast<std::size_t>(c)]);
    }
  }
  SUBCASE("deterministic per seed, with reproducible out-of-bag rows") {
    const auto [X, y] = blobs(60, 3);
    auto spec = spec_for(ModelKind::RandomForest, 5);
    const auto a = train_classifier(spec, X, y), b = train_classifier(spec, X, y);
    CHECK(a == b);
    const auto& forest = std::get<ForestModel>(a.parameters);
    CHECK(forest.trees.size() == 10);
    CHECK(forest.out_of_bag_rows(3, 60) == std::get<ForestModel>(b.parameters).out_of_bag_rows(3, 60));
    const FeatureMatrix p = a.predict_proba(X);
    CHECK((p.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-9);
  }
  SUBCASE("feature subset sizes") {
    CHECK(max_features_count(MaxFeatures::Log2, 771) == 9);
    CHECK(max_features_count(MaxFeatures::Sqrt, 771) == 27);
    CHECK(max_features_count(MaxFeatures::Log2, 1) == 1);
    CHECK_THROWS_AS(parse_max_features("half"), UsageError);
  }
  SUBCASE("hard voting counts tree winners") {
    const auto [X, y] = blobs(30, 4);
    auto spec = spec_for(ModelKind::RandomForest, 1);
    spec.forest_soft_voting = false;
    const FeatureMatrix p = train_classifier(spec, X, y).predict_proba(X);
    CHECK(((p.array() * 10.0).round() - p.array() * 10.0).abs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("neural network") {
  SUBCASE("gradient matches finite differences without dropout") {
    FeatureMatrix X = FeatureMatrix::Random(10, 8);
    ClassCodes y;
    for (int i = 0; i < 10; ++i) y.push_back(i % 3);
    auto p = init_mlp(8, 6, 3, 4);
    MlpParams<double> g;
    mlp_objective<double>(p, X, y, 1e-2, nullptr, &g);
    auto f = [&] { return mlp_objective(p, X, y, 1e-2); };
    CHECK(oracle::relative_error(g.w1, oracle::numeric_gradient(p.w1, f)) <= 1e-4);
    CHECK(oracle::relative_error(g.b1, oracle::numeric_gradient(p.b1, f)) <= 1e-4);
    CHECK(oracle::relative_error(g.w2, oracle::numeric_gradient(p.w2, f)) <= 1e-4);
    CHECK(oracle::relative_error(g.b2, oracle::numeric_gradient(p.b2, f)) <= 1e-4);
  }
  SUBCASE("separable blobs") {
    const auto [X, y] = blobs(64, 5);
    auto spec = spec_for(ModelKind::NeuralNetwork, 2);
    spec.hyper_params["NN_lr"] = 1e-2;
    spec.hyper_params["NN_e"] = 100.0;
    spec.hyper_params["NN_dp"] = 0.1;
    const auto m = train_classifier(spec, X, y);
    CHECK(accuracy(m.predict(X), y) >= 0.95);
    CHECK(m.predict_proba(X) == m.predict_proba(X));
    CHECK((m.predict_proba(X).rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-6);
  }
  SUBCASE("divergence names the epoch") {
    FeatureMatrix X = FeatureMatrix::Random(40, 3) * 1e6;
    LabelList y;
    for (int i = 0; i < 40; ++i) y.push_back(i % 2 ? "a" : "b");
    auto spec = spec_for(ModelKind::NeuralNetwork, 2);
    spec.hyper_params["NN_lr"] = 1e6;
    spec.hyper_params["NN_e"] = 100.0;
    CHECK_THROWS_WITH_AS(train_classifier(spec, X, y), doctest::Contains("training diverged at epoch"), Error);
  }
}

TEST_CASE("prediction contract") {
  const auto [X, y] = blobs(40, 6);
  std::mt19937_64 rng(1);
  const FeatureMatrix probe = FeatureMatrix::Random(100, 2) * 3.0;
  for (auto kind : {ModelKind::LogisticRegression, ModelKind::RandomForest, ModelKind::NeuralNetwork, ModelKind::ZeroR}) {
    const auto m = train_classifier(spec_for(kind, 3), X, y);
    const auto pred = m.predict(probe);
    const FeatureMatrix p = m.predict_proba(probe);
    for (Eigen::Index i = 0; i < probe.rows(); ++i) {
      CHECK(pred[static_cast<std::size_t>(i)] == m.label_set[static_cast<std::size_t>(argmax_row(p.row(i)))]);
    }
    CHECK_THROWS_AS(m.predict(FeatureMatrix::Zero(1, 3)), Error);
    CHECK(classifier_from_json(classifier_to_json(m)) == m);
  }
  CHECK(parse_model_kind("rf") == ModelKind::RandomForest);
  CHECK_THROWS_AS(parse_model_kind("svm"), UsageError);
}

TEST_CASE("SMOTE inside train_classifier reports its origins") {
  FeatureMatrix X = FeatureMatrix::Random(20, 3);
  LabelList y(20, "big");
  for (int i = 0; i < 5; ++i) y[static_cast<std::size_t>(i)] = "small";
  auto spec = spec_for(ModelKind::LogisticRegression);
  spec.smote_enabled = true;
  spec.hyper_params["SM_k"] = 3.0;
  TrainingDiagnostics diag;
  train_classifier(spec, X, y, &diag);
  CHECK(diag.original_rows == 20);
  CHECK(diag.synthetic.size() == 10);
  for (const auto& o : diag.synthetic) {
    CHECK(o.source < 5);
    CHECK(o.neighbor < 5);
  }
}
