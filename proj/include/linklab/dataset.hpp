#pragma once

#include "linklab/types.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace linklab {

using Timestamp = std::chrono::sys_seconds;

/// Parses ISO-8601 dates and date-times ("2013-04-02", "2013-04-02T10:11:12.000+0100",
/// "...Z") into UTC. Throws Error on malformed input.
Timestamp parse_timestamp(const std::string& text);
/// Canonical UTC rendering, `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_timestamp(Timestamp t);
/// Signed difference a - b in fractional days.
double days_between(Timestamp a, Timestamp b);

struct Issue {
  std::string id;
  std::string summary;
  std::string description;
  std::string issue_type;
  std::string status;
  Timestamp created{};
  std::optional<std::string> assignee;
  std::string reporter;
  std::string project;

  bool operator==(const Issue&) const = default;
};

/// Directed within-project link stored in its outward form.
struct IssueLink {
  std::string source;
  std::string target;
  std::string label;

  bool operator==(const IssueLink&) const = default;
  auto operator<=>(const IssueLink&) const = default;
};

struct ProjectDataset {
  std::string project;
  std::vector<Issue> issues;
  std::vector<IssueLink> links;

  bool operator==(const ProjectDataset&) const = default;

  /// Position of an issue id in `issues`, if present.
  std::optional<std::size_t> find_issue(const std::string& id) const;
};

struct LabelFilterPolicy {
  double min_fraction = 0.01;
  int min_count = 20;
};

enum class ViolationKind {
  DuplicateIssueId,
  DanglingEndpoint,
  SelfLink,
  DuplicateLink,
  FutureTimestamp,
  EmptyLabel,
};

struct Violation {
  ViolationKind kind;
  std::string subject;  // offending issue id or "source->target:label"
  std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Checks every dataset invariant. `snapshot` bounds issue creation times; when
/// absent the current wall-clock time is used.
ValidationReport validate_dataset(const ProjectDataset& dataset,
                                  std::optional<Timestamp> snapshot = std::nullopt);

/// Drops links whose label has fewer than `min_count` occurrences OR a share of
/// all links below `min_fraction`. Issues are untouched.
ProjectDataset filter_labels(const ProjectDataset& dataset, const LabelFilterPolicy& policy);

struct LabelShare {
  std::size_t count = 0;
  double fraction = 0.0;
};

std::map<std::string, LabelShare> label_distribution(const ProjectDataset& dataset);
std::map<std::string, LabelShare> label_distribution(const LabelList& labels);

/// Share of issues that appear as an endpoint of at least one link.
double linked_issue_ratio(const ProjectDataset& dataset);

/// Majority label of a label list; ties go to the lexicographically smallest label.
std::string majority_label(const LabelList& labels);

/// Weighted F1 of the constant majority predictor over `labels`:
/// p·2p/(1+p) where p is the majority share.
double analytic_zeror_f1(const LabelList& labels);

/// Labels of all links, in link order.
LabelList link_labels(const ProjectDataset& dataset);

// JSON persistence (schema: project, issues[], links[]).
ProjectDataset load_dataset(const std::filesystem::path& path);
void save_dataset(const ProjectDataset& dataset, const std::filesystem::path& path);
std::string dataset_to_json(const ProjectDataset& dataset);
ProjectDataset dataset_from_json(const std::string& text);

struct CorpusRatioStats {
  std::size_t projects = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::map<std::string, double> per_project;
};

/// Linked-issue ratio summarised over every `*.json` dataset in a directory.
CorpusRatioStats linked_ratio_over_directory(const std::filesystem::path& dir);

}  // namespace linklab
