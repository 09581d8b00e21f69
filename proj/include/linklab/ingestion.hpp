#pragma once

#include "linklab/dataset.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace linklab {

struct JiraSourceConfig {
  std::string base_url;  // scheme://host[:port][/prefix]
  std::string project_key;
  std::optional<std::string> auth_token;
  int page_size = 100;
  double request_timeout = 30.0;  // seconds
  int max_retries = 3;
  /// First backoff delay; doubles after every failed attempt.
  double initial_backoff = 0.5;
  std::string search_path = "/rest/api/2/search";

  void validate() const;
};

/// An issue document as returned by the search API (id/key plus a `fields` object).
using RawIssueRecord = nlohmann::json;

struct FetchStats {
  int requests = 0;
  int retries = 0;
};

/// Pages through the search endpoint until every issue is read. Transient
/// failures (connection errors, 5xx, 429) are retried with exponential backoff.
/// Errors: "auth error" on 401/403, "source unavailable" once retries run out,
/// "protocol error" naming the page offset for malformed pages.
std::vector<RawIssueRecord> fetch_project(const JiraSourceConfig& config, FetchStats* stats = nullptr);

/// Reads an exported dump: a JSON array of issues or a search page with an
/// `issues` array. Parse errors report the byte offset.
std::vector<RawIssueRecord> load_dump(const std::filesystem::path& path);

/// Outward/inward descriptor pairs of the known link types.
class LinkTypeTable {
 public:
  /// The 16 types bundled with the library.
  static LinkTypeTable bundled();
  /// Lines of `outward<TAB>inward`; a missing inward column means both forms are equal.
  static LinkTypeTable from_tsv(std::string_view text);

  void add(const std::string& outward, const std::string& inward);
  bool is_outward(const std::string& label) const { return inward_of_.contains(label); }
  /// Outward form of an inward descriptor, when it is one.
  std::optional<std::string> outward_of(const std::string& inward) const;

 private:
  std::map<std::string, std::string> inward_of_;
  std::map<std::string, std::string> outward_of_;
};

struct IngestionReport {
  std::size_t external_drops = 0;  // links whose other endpoint is not in the record set
  std::size_t self_links = 0;
  std::size_t duplicates = 0;      // repeated outward entries
  std::size_t disagreements = 0;   // inward entries without a matching outward entry
  std::vector<std::string> messages;
};

/// Builds one ProjectDataset from the records of a project. Every logical link
/// is stored once in its outward direction; the outward record is trusted when
/// the two endpoint records disagree. Timestamps are normalised to UTC.
ProjectDataset canonicalize_links(const std::vector<RawIssueRecord>& records, IngestionReport* report = nullptr,
                                  const LinkTypeTable& types = LinkTypeTable::bundled());

}  // namespace linklab
