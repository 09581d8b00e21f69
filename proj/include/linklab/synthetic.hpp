#pragma once

#include "linklab/dataset.hpp"

#include <cstdint>
#include <string>

namespace linklab {

/// How a synthetic link label follows from its endpoints. With ta and tb the
/// positions of the endpoint issue types in synthetic_issue_types() and s the
/// number of distinct lowercase summary words both endpoints share:
///   TypePair:             label = (ta + 2 tb) mod L
///   TypePairSharedTokens: label = (ta + 2 tb + 3 [s >= 2]) mod L
enum class SyntheticRule { TypePair, TypePairSharedTokens };

std::string to_string(SyntheticRule rule);
/// "type-pair" or "type-pair-shared".
SyntheticRule parse_synthetic_rule(const std::string& name);

struct SyntheticOptions {
  int n_issues = 1500;
  /// Defaults to n_issues when negative.
  int n_links = -1;
  int n_labels = 5;
  SyntheticRule rule = SyntheticRule::TypePairSharedTokens;
  /// Probability of replacing the rule label by a uniformly drawn one (possibly the same).
  double noise = 0.1;
  std::uint64_t seed = 0;
  std::string project = "SYN";
};

const std::vector<std::string>& synthetic_issue_types();
/// The first n link label names; real Jira labels first, then "label-N".
LabelList synthetic_label_names(int n);

/// Label the rule assigns to a link between two issues.
std::string rule_label(SyntheticRule rule, const LabelList& labels, const Issue& source, const Issue& target);

/// Issues with templated summaries, descriptions and metadata, created at
/// steady intervals, plus links labelled by the rule and then noise.
/// Deterministic per seed.
ProjectDataset generate_synthetic(const SyntheticOptions& options);

}  // namespace linklab
