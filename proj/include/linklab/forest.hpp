#pragma once

#include "linklab/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace linklab {

enum class MaxFeatures { Log2, Sqrt, All };

MaxFeatures parse_max_features(const std::string& name);
std::string to_string(MaxFeatures f);
/// Candidate features per split for an encoding of width d (at least 1).
int max_features_count(MaxFeatures f, Eigen::Index d);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<double> distribution;  // class frequencies at a leaf

  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const std::vector<double>& leaf_distribution(const Eigen::Ref<const RowVector<double>>& x) const;
  bool operator==(const DecisionTree&) const = default;
};

struct ForestOptions {
  int n_estimators = 10;
  MaxFeatures max_features = MaxFeatures::Sqrt;
  bool bootstrap = true;
  /// Soft voting averages leaf frequency vectors; hard voting counts per-tree argmax.
  bool soft_voting = true;
  std::uint64_t seed = 0;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  std::vector<std::uint64_t> tree_seeds;
  int n_classes = 0;
  bool soft_voting = true;

  FeatureMatrix predict_proba(const FeatureMatrix& X) const;

  /// Rows drawn for tree t when it was trained on n samples.
  std::vector<Eigen::Index> bootstrap_rows(std::size_t tree, Eigen::Index n) const;
  /// Rows never drawn for tree t.
  std::vector<Eigen::Index> out_of_bag_rows(std::size_t tree, Eigen::Index n) const;

  bool operator==(const ForestModel&) const = default;
};

/// Gini-split trees grown until pure or fewer than two samples remain. Tree t
/// of a forest is the tree this returns for its bootstrap rows and tree_seeds[t].
DecisionTree train_decision_tree(const FeatureMatrix& X, const ClassCodes& y, int n_classes,
                                 const std::vector<Eigen::Index>& rows, int max_features, std::uint64_t seed);

ForestModel train_random_forest(const FeatureMatrix& X, const ClassCodes& y, int n_classes,
                                const ForestOptions& options);

}  // namespace linklab
