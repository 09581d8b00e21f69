#include "linklab/forest.hpp"

#include "linklab/math.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace linklab {

MaxFeatures parse_max_features(const std::string& name) {
  if (name == "log2") return MaxFeatures::Log2;
  if (name == "sqrt") return MaxFeatures::Sqrt;
  if (name == "all") return MaxFeatures::All;
  throw UsageError("unknown RF_f '" + name + "' (expected log2 or sqrt)");
}

std::string to_string(MaxFeatures f) {
  switch (f) {
    case MaxFeatures::Log2:
      return "log2";
    case MaxFeatures::Sqrt:
      return "sqrt";
    case MaxFeatures::All:
      return "all";
  }
  return "sqrt";
}

int max_features_count(MaxFeatures f, Eigen::Index d) {
  int m = static_cast<int>(d);
  switch (f) {
    case MaxFeatures::Log2:
      m = d > 0 ? static_cast<int>(std::floor(std::log2(static_cast<double>(d)))) : 0;
      break;
    case MaxFeatures::Sqrt:
      m = static_cast<int>(std::floor(std::sqrt(static_cast<double>(d))));
      break;
    case MaxFeatures::All:
      break;
  }
  return std::max(1, m);
}

const std::vector<double>& DecisionTree::leaf_distribution(const Eigen::Ref<const RowVector<double>>& x) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const auto& n = nodes[static_cast<std::size_t>(node)];
    node = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(node)].distribution;
}

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = -1.0;  // sum_c L_c^2/n_L + sum_c R_c^2/n_R, larger is purer
};

/// Row-compressed nonzeros of a dense feature matrix.
struct SparseRows {
  std::vector<std::size_t> start;
  std::vector<int> feature;
  std::vector<double> value;

  explicit SparseRows(const FeatureMatrix& X) {
    start.reserve(static_cast<std::size_t>(X.rows()) + 1);
    start.push_back(0);
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      for (Eigen::Index c = 0; c < X.cols(); ++c) {
        if (X(r, c) != 0.0) {
          feature.push_back(static_cast<int>(c));
          value.push_back(X(r, c));
        }
      }
      start.push_back(feature.size());
    }
  }
};

/// Column-compressed nonzeros of a dense feature matrix.
struct SparseCols {
  std::vector<std::size_t> start;
  std::vector<Eigen::Index> row;
  std::vector<double> value;

  explicit SparseCols(const FeatureMatrix& X) {
    start.reserve(static_cast<std::size_t>(X.cols()) + 1);
    start.push_back(0);
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      for (Eigen::Index r = 0; r < X.rows(); ++r) {
        if (X(r, c) != 0.0) {
          row.push_back(r);
          value.push_back(X(r, c));
        }
      }
      start.push_back(row.size());
    }
  }
};

/// A distinct training row and how many times the bootstrap drew it.
struct Sample {
  Eigen::Index row;
  double weight;
};

std::vector<Sample> collapse_rows(std::vector<Eigen::Index> rows) {
  std::sort(rows.begin(), rows.end());
  std::vector<Sample> out;
  for (auto r : rows) {
    if (!out.empty() && out.back().row == r) {
      out.back().weight += 1.0;
    } else {
      out.push_back({r, 1.0});
    }
  }
  return out;
}

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& X, const SparseRows& rows, const SparseCols& cols, const ClassCodes& y,
              int n_classes, int max_features, std::uint64_t seed)
      : X_(X), rows_(rows), cols_(cols), y_(y), n_classes_(n_classes), max_features_(max_features), rng_(seed),
        all_features_(static_cast<std::size_t>(X.cols())), seen_(static_cast<std::size_t>(X.cols()), 0),
        position_(static_cast<std::size_t>(X.rows()), kAbsent), zero_counts_(static_cast<std::size_t>(n_classes)),
        left_(static_cast<std::size_t>(n_classes)) {
    std::iota(all_features_.begin(), all_features_.end(), 0);
    // Past this many node rows, drawing features and reading their columns is
    // cheaper than bucketing every nonzero of the node.
    const double row_nnz = static_cast<double>(rows.feature.size()) / static_cast<double>(std::max<Eigen::Index>(1, X.rows()));
    const double col_nnz = static_cast<double>(rows.feature.size()) / static_cast<double>(std::max<Eigen::Index>(1, X.cols()));
    column_node_limit_ = static_cast<std::size_t>(0.5 * max_features * col_nnz / std::max(1.0, row_nnz));
  }

  DecisionTree build(const std::vector<Eigen::Index>& rows) {
    samples_ = collapse_rows(rows);
    for (std::size_t i = 0; i < samples_.size(); ++i) position_[static_cast<std::size_t>(samples_[i].row)] = i;
    DecisionTree tree;
    struct Task {
      int node;
      std::size_t begin, end;
    };
    tree.nodes.emplace_back();
    std::vector<Task> stack{{0, 0, samples_.size()}};
    std::vector<double> counts(static_cast<std::size_t>(n_classes_));
    while (!stack.empty()) {
      const Task task = stack.back();
      stack.pop_back();
      std::fill(counts.begin(), counts.end(), 0.0);
      double n = 0.0;
      for (std::size_t i = task.begin; i < task.end; ++i) {
        counts[static_cast<std::size_t>(label(i))] += samples_[i].weight;
        n += samples_[i].weight;
      }
      const auto distinct = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; });

      Split split;
      if (n >= 2.0 && distinct > 1) split = best_split(task.begin, task.end, counts, n);
      if (split.feature < 0) {
        auto& leaf = tree.nodes[static_cast<std::size_t>(task.node)];
        leaf.distribution = counts;
        for (auto& c : leaf.distribution) c /= n;
        continue;
      }
      const double* col = X_.col(split.feature).data();
      const auto mid_it = std::partition(samples_.begin() + static_cast<std::ptrdiff_t>(task.begin),
                                         samples_.begin() + static_cast<std::ptrdiff_t>(task.end),
                                         [&](const Sample& s) { return col[s.row] <= split.threshold; });
      const auto mid = static_cast<std::size_t>(mid_it - samples_.begin());
      for (std::size_t i = task.begin; i < task.end; ++i) position_[static_cast<std::size_t>(samples_[i].row)] = i;
      const int left = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      auto& node = tree.nodes[static_cast<std::size_t>(task.node)];
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = left;
      node.right = left + 1;
      stack.push_back({left + 1, mid, task.end});
      stack.push_back({left, task.begin, mid});
    }
    return tree;
  }

 private:
  static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  struct Entry {
    double value;
    int label;
    double weight;
  };

  int label(std::size_t i) const { return y_[static_cast<std::size_t>(samples_[i].row)]; }

  // Candidate features are visited in uniformly random order until
  // max_features non-constant ones have been evaluated. Features that are zero
  // on every node row are constant there, so small nodes only draw from the
  // features with a nonzero on some node row.
  Split best_split(std::size_t begin, std::size_t end, const std::vector<double>& total, double n) {
    if (end - begin > column_node_limit_) return draw_and_evaluate(all_features_, begin, end, total, n);
    touched_.clear();
    for (std::size_t i = begin; i < end; ++i) {
      const auto r = static_cast<std::size_t>(samples_[i].row);
      for (std::size_t k = rows_.start[r]; k < rows_.start[r + 1]; ++k) {
        auto& seen = seen_[static_cast<std::size_t>(rows_.feature[k])];
        if (!seen) {
          seen = 1;
          touched_.push_back(rows_.feature[k]);
        }
      }
    }
    for (int f : touched_) seen_[static_cast<std::size_t>(f)] = 0;
    return draw_and_evaluate(touched_, begin, end, total, n);
  }

  Split draw_and_evaluate(std::vector<int>& features, std::size_t begin, std::size_t end,
                          const std::vector<double>& total, double n) {
    Split best;
    const std::size_t d = features.size();
    int evaluated = 0;
    for (std::size_t j = 0; j < d && evaluated < max_features_; ++j) {
      const auto span = static_cast<unsigned __int128>(d - j);
      std::swap(features[j], features[j + static_cast<std::size_t>((rng_() * span) >> 64)]);
      gather(features[j], begin, end);
      if (entries_.empty()) continue;
      if (evaluate_feature(features[j], end - begin, total, n, best)) ++evaluated;
    }
    return best;
  }

  // Collects the node's nonzeros of feature f, from whichever of the sparse
  // or dense column is shorter.
  void gather(int f, std::size_t begin, std::size_t end) {
    entries_.clear();
    const auto col = static_cast<std::size_t>(f);
    if (cols_.start[col + 1] - cols_.start[col] <= end - begin) {
      for (std::size_t k = cols_.start[col]; k < cols_.start[col + 1]; ++k) {
        const std::size_t at = position_[static_cast<std::size_t>(cols_.row[k])];
        if (at >= begin && at < end) entries_.push_back({cols_.value[k], label(at), samples_[at].weight});
      }
      return;
    }
    const double* values = X_.col(f).data();
    for (std::size_t i = begin; i < end; ++i) {
      const double v = values[samples_[i].row];
      if (v != 0.0) entries_.push_back({v, label(i), samples_[i].weight});
    }
  }

  // Returns false when the feature is constant over the node.
  bool evaluate_feature(int f, std::size_t rows, const std::vector<double>& total, double n, Split& best) {
    Entry* first = entries_.data();
    Entry* last = first + entries_.size();
    const auto size = entries_.size();
    if (size == rows) {
      const bool varies = std::any_of(first, last, [&](const Entry& e) { return e.value != first->value; });
      if (!varies) return false;
    }
    std::sort(first, last, [](const Entry& a, const Entry& b) { return a.value < b.value; });
    std::copy(total.begin(), total.end(), zero_counts_.begin());
    double zeros = n;
    for (const Entry* e = first; e != last; ++e) {
      zero_counts_[static_cast<std::size_t>(e->label)] -= e->weight;
      zeros -= e->weight;
    }

    std::fill(left_.begin(), left_.end(), 0.0);
    double left_n = 0.0, left_sq = 0.0;
    double right_sq = 0.0;
    for (double c : total) right_sq += c * c;

    auto add = [&](int c, double w) {
      const double lc = left_[static_cast<std::size_t>(c)];
      const double rc = total[static_cast<std::size_t>(c)] - lc;
      left_sq += 2.0 * lc * w + w * w;
      right_sq += -2.0 * rc * w + w * w;
      left_[static_cast<std::size_t>(c)] += w;
      left_n += w;
    };
    auto consider = [&](double lo, double hi) {
      if (left_n <= 0.0 || left_n >= n) return;
      const double score = left_sq / left_n + right_sq / (n - left_n);
      if (score > best.score) {
        double thr = lo + (hi - lo) / 2.0;
        if (thr >= hi) thr = lo;
        best = {f, thr, score};
      }
    };

    Entry* positives = std::partition_point(first, last, [](const Entry& e) { return e.value < 0.0; });
    // Walk negatives, then the zero block, then positives, in ascending value order.
    double prev = 0.0;
    bool have_prev = false;
    auto step_value = [&](double value) {
      if (have_prev && value != prev) consider(prev, value);
      prev = value;
      have_prev = true;
    };
    for (Entry* e = first; e != positives; ++e) {
      step_value(e->value);
      add(e->label, e->weight);
    }
    if (zeros > 0.5) {
      step_value(0.0);
      for (int c = 0; c < n_classes_; ++c) {
        if (zero_counts_[static_cast<std::size_t>(c)] > 0.5) add(c, zero_counts_[static_cast<std::size_t>(c)]);
      }
    }
    for (Entry* e = positives; e != last; ++e) {
      step_value(e->value);
      add(e->label, e->weight);
    }
    return true;
  }

  const FeatureMatrix& X_;
  const SparseRows& rows_;
  const SparseCols& cols_;
  const ClassCodes& y_;
  int n_classes_;
  int max_features_;
  std::mt19937_64 rng_;
  std::vector<int> all_features_;
  std::vector<char> seen_;
  std::vector<std::size_t> position_;
  std::size_t column_node_limit_ = 0;
  std::vector<Sample> samples_;
  std::vector<int> touched_;
  std::vector<Entry> entries_;
  std::vector<double> zero_counts_;
  std::vector<double> left_;
};

}  // namespace

DecisionTree train_decision_tree(const FeatureMatrix& X, const ClassCodes& y, int n_classes,
                                 const std::vector<Eigen::Index>& rows, int max_features, std::uint64_t seed) {
  if (rows.empty()) throw Error("decision tree needs at least one sample");
  const SparseRows sparse_rows(X);
  const SparseCols sparse_cols(X);
  TreeBuilder builder(X, sparse_rows, sparse_cols, y, n_classes, std::max(1, max_features), mix_seed(seed, 1));
  return builder.build(rows);
}

std::vector<Eigen::Index> ForestModel::bootstrap_rows(std::size_t tree, Eigen::Index n) const {
  std::mt19937_64 rng(tree_seeds.at(tree));
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
  for (auto& r : rows) r = pick(rng);
  return rows;
}

std::vector<Eigen::Index> ForestModel::out_of_bag_rows(std::size_t tree, Eigen::Index n) const {
  std::vector<bool> drawn(static_cast<std::size_t>(n), false);
  for (auto r : bootstrap_rows(tree, n)) drawn[static_cast<std::size_t>(r)] = true;
  std::vector<Eigen::Index> oob;
  for (Eigen::Index r = 0; r < n; ++r) {
    if (!drawn[static_cast<std::size_t>(r)]) oob.push_back(r);
  }
  return oob;
}

FeatureMatrix ForestModel::predict_proba(const FeatureMatrix& X) const {
  FeatureMatrix proba = FeatureMatrix::Zero(X.rows(), n_classes);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const RowVector<double> x = X.row(i);
    for (const auto& tree : trees) {
      const auto& dist = tree.leaf_distribution(x);
      if (soft_voting) {
        for (int c = 0; c < n_classes; ++c) proba(i, c) += dist[static_cast<std::size_t>(c)];
      } else {
        const auto top = std::max_element(dist.begin(), dist.end()) - dist.begin();
        proba(i, top) += 1.0;
      }
    }
  }
  proba /= static_cast<double>(trees.size());
  return proba;
}

ForestModel train_random_forest(const FeatureMatrix& X, const ClassCodes& y, int n_classes,
                                const ForestOptions& options) {
  if (options.n_estimators < 1) throw Error("RF_e must be at least 1");
  if (static_cast<std::size_t>(X.rows()) != y.size() || y.empty()) throw Error("RF: bad training shapes");
  ForestModel forest;
  forest.n_classes = n_classes;
  forest.soft_voting = options.soft_voting;
  const int m = max_features_count(options.max_features, X.cols());
  std::vector<Eigen::Index> all(static_cast<std::size_t>(X.rows()));
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  const SparseRows sparse_rows(X);
  const SparseCols sparse_cols(X);
  for (int t = 0; t < options.n_estimators; ++t) {
    const std::uint64_t tree_seed = mix_seed(options.seed, static_cast<std::uint64_t>(t));
    forest.tree_seeds.push_back(tree_seed);
    const auto rows = options.bootstrap ? forest.bootstrap_rows(static_cast<std::size_t>(t), X.rows()) : all;
    TreeBuilder builder(X, sparse_rows, sparse_cols, y, n_classes, m, mix_seed(tree_seed, 1));
    forest.trees.push_back(builder.build(rows));
  }
  return forest;
}

}  // namespace linklab
