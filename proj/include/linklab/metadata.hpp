#pragma once

#include "linklab/dataset.hpp"
#include "linklab/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace linklab {

/// One-hot position map for a categorical field. Index 0 is reserved for
/// unknown or missing values, so the width is categories + 1.
class CategoryIndex {
 public:
  CategoryIndex() = default;
  explicit CategoryIndex(const std::vector<std::string>& values);

  int index_of(const std::optional<std::string>& value) const;
  int width() const { return static_cast<int>(positions_.size()) + 1; }
  const std::map<std::string, int>& positions() const { return positions_; }

  bool operator==(const CategoryIndex&) const = default;

 private:
  std::map<std::string, int> positions_;
};

struct MetadataRegistry {
  CategoryIndex type_index;
  CategoryIndex assignee_index;
  CategoryIndex reporter_index;
  double time_delta_mean = 0.0;  // days
  double time_delta_std = 0.0;   // population std, days

  /// 1 + 2 * (type + assignee + reporter widths).
  int width() const;

  bool operator==(const MetadataRegistry&) const = default;
};

/// Fits category indices and time-delta statistics from training links only.
MetadataRegistry fit_metadata_registry(const std::vector<IssueLink>& train_links, const ProjectDataset& dataset);

/// [normalised |Δdays|, type(a), assignee(a), reporter(a), type(b), assignee(b), reporter(b)].
FeatureVector encode_metadata(const MetadataRegistry& registry, const Issue& a, const Issue& b);

}  // namespace linklab
