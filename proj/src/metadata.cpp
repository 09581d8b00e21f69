#include "linklab/metadata.hpp"

#include <cmath>
#include <set>

namespace linklab {

CategoryIndex::CategoryIndex(const std::vector<std::string>& values) {
  const std::set<std::string> unique(values.begin(), values.end());
  int next = 1;
  for (const auto& v : unique) positions_.emplace(v, next++);
}

int CategoryIndex::index_of(const std::optional<std::string>& value) const {
  if (!value) return 0;
  auto it = positions_.find(*value);
  return it == positions_.end() ? 0 : it->second;
}

int MetadataRegistry::width() const {
  return 1 + 2 * (type_index.width() + assignee_index.width() + reporter_index.width());
}

MetadataRegistry fit_metadata_registry(const std::vector<IssueLink>& train_links, const ProjectDataset& dataset) {
  if (train_links.empty()) throw Error("metadata registry needs at least one training link");
  std::map<std::string, const Issue*> by_id;
  for (const auto& issue : dataset.issues) by_id.emplace(issue.id, &issue);

  std::vector<std::string> types, assignees, reporters;
  std::vector<double> deltas;
  deltas.reserve(train_links.size());
  for (const auto& link : train_links) {
    const Issue* a = by_id.at(link.source);
    const Issue* b = by_id.at(link.target);
    for (const Issue* issue : {a, b}) {
      types.push_back(issue->issue_type);
      if (issue->assignee) assignees.push_back(*issue->assignee);
      reporters.push_back(issue->reporter);
    }
    deltas.push_back(std::abs(days_between(a->created, b->created)));
  }

  MetadataRegistry reg;
  reg.type_index = CategoryIndex(types);
  reg.assignee_index = CategoryIndex(assignees);
  reg.reporter_index = CategoryIndex(reporters);
  double sum = 0.0;
  for (double d : deltas) sum += d;
  reg.time_delta_mean = sum / static_cast<double>(deltas.size());
  double var = 0.0;
  for (double d : deltas) var += (d - reg.time_delta_mean) * (d - reg.time_delta_mean);
  reg.time_delta_std = std::sqrt(var / static_cast<double>(deltas.size()));
  return reg;
}

FeatureVector encode_metadata(const MetadataRegistry& registry, const Issue& a, const Issue& b) {
  FeatureVector out = FeatureVector::Zero(registry.width());
  const double delta = std::abs(days_between(a.created, b.created));
  out[0] = registry.time_delta_std > 0.0 ? (delta - registry.time_delta_mean) / registry.time_delta_std : 0.0;

  Eigen::Index offset = 1;
  auto one_hot = [&](const CategoryIndex& index, const std::optional<std::string>& value) {
    out[offset + index.index_of(value)] = 1.0;
    offset += index.width();
  };
  for (const Issue* issue : {&a, &b}) {
    one_hot(registry.type_index, issue->issue_type);
    one_hot(registry.assignee_index, issue->assignee);
    one_hot(registry.reporter_index, issue->reporter);
  }
  return out;
}

}  // namespace linklab
