#pragma once

#include "linklab/dataset.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace testing {

using Counts = std::vector<std::pair<std::string, int>>;

/// Published link label counts of three Apache projects.
inline const Counts kAmbari{{"relates to", 310},   {"duplicates", 305},    {"blocks", 89},      {"depends upon", 70},
                            {"requires", 38},      {"contains", 27},       {"is a clone of", 27}, {"breaks", 26},
                            {"incorporates", 21},  {"supercedes", 15},     {"causes", 6},       {"Blocked", 5},
                            {"is a parent of", 2}, {"Dependent", 1}};
inline const Counts kFlex{{"relates to", 94}, {"duplicates", 51},  {"blocks", 20},       {"depends upon", 13},
                          {"requires", 20},   {"contains", 2},     {"is a clone of", 23}, {"breaks", 14},
                          {"incorporates", 8}, {"supercedes", 2}};
inline const Counts kHive{{"relates to", 3060},  {"duplicates", 708},   {"blocks", 717},         {"depends upon", 373},
                          {"requires", 134},     {"contains", 103},     {"is a clone of", 71},   {"breaks", 190},
                          {"incorporates", 339}, {"supercedes", 84},    {"causes", 11},          {"Blocked", 11},
                          {"is a parent of", 3}, {"Dependent", 5},      {"Dependency", 1},       {"Parent Feature", 1}};

inline linklab::Issue make_issue(const std::string& id, int day, const std::string& type = "Bug",
                                 const std::string& summary = "", const std::string& description = "") {
  linklab::Issue issue;
  issue.id = id;
  issue.project = id.substr(0, id.find('-'));
  issue.issue_type = type;
  issue.summary = summary;
  issue.description = description;
  issue.status = "Open";
  issue.reporter = "reporter";
  issue.created = linklab::parse_timestamp("2015-01-01T00:00:00Z") + std::chrono::days(day);
  return issue;
}

/// One fresh issue pair per link, so every link is distinct.
inline linklab::ProjectDataset dataset_from_counts(const Counts& counts) {
  linklab::ProjectDataset d;
  d.project = "P";
  int next = 0;
  for (const auto& [label, n] : counts) {
    for (int i = 0; i < n; ++i) {
      const std::string a = "P-" + std::to_string(next++), b = "P-" + std::to_string(next++);
      d.issues.push_back(make_issue(a, next));
      d.issues.push_back(make_issue(b, next));
      d.links.push_back({a, b, label});
    }
  }
  return d;
}

/// A scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("linklab-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
