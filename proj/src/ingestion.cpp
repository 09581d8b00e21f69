#include "linklab/ingestion.hpp"

#include "linklab/log.hpp"
#include "linklab/resources.hpp"

#include <httplib.h>

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace linklab {

using nlohmann::json;

void JiraSourceConfig::validate() const {
  if (base_url.empty()) throw UsageError("base_url is required");
  if (project_key.empty()) throw UsageError("project_key is required");
  if (page_size < 1) throw UsageError("page_size must be at least 1");
  if (max_retries < 0) throw UsageError("max_retries must be non-negative");
  if (request_timeout <= 0) throw UsageError("request_timeout must be positive");
}

namespace {

const char* kFields = "summary,description,issuetype,status,created,assignee,reporter,issuelinks";

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

SplitUrl split_url(const std::string& url) {
  const auto scheme = url.find("://");
  const auto path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_start == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_start), prefix};
}

bool transient_status(int status) { return status == 429 || status >= 500; }

}  // namespace

std::vector<RawIssueRecord> fetch_project(const JiraSourceConfig& config, FetchStats* stats) {
  config.validate();
  const SplitUrl url = split_url(config.base_url);
  httplib::Client client(url.origin);
  const auto timeout = std::chrono::duration<double>(config.request_timeout);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));

  httplib::Headers headers{{"Accept", "application/json"}};
  if (config.auth_token) headers.emplace("Authorization", "Bearer " + *config.auth_token);

  FetchStats local;
  FetchStats& st = stats ? *stats : local;
  std::vector<RawIssueRecord> records;
  long long start_at = 0;
  while (true) {
    httplib::Params params{{"jql", "project=" + config.project_key},
                           {"startAt", std::to_string(start_at)},
                           {"maxResults", std::to_string(config.page_size)},
                           {"fields", kFields}};
    std::string body;
    for (int attempt = 0;; ++attempt) {
      ++st.requests;
      auto res = client.Get(url.prefix + config.search_path, params, headers);
      std::string failure;
      if (!res) {
        failure = "connection failed: " + httplib::to_string(res.error());
      } else if (res->status == 401 || res->status == 403) {
        throw Error("auth error: HTTP " + std::to_string(res->status));
      } else if (transient_status(res->status)) {
        failure = "HTTP " + std::to_string(res->status);
      } else if (res->status != 200) {
        throw Error("source unavailable: HTTP " + std::to_string(res->status) + " at offset " +
                    std::to_string(start_at));
      } else {
        body = std::move(res->body);
        break;
      }
      if (attempt >= config.max_retries) {
        throw Error("source unavailable: " + failure + " after " + std::to_string(attempt) + " retries");
      }
      const double delay = config.initial_backoff * static_cast<double>(1LL << attempt);
      ++st.retries;
      logger().warn("request at offset {} failed ({}); retry {} in {:.2f}s", start_at, failure, attempt + 1, delay);
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }

    const json page = json::parse(body, nullptr, false);
    if (page.is_discarded() || !page.is_object() || !page.contains("issues") || !page["issues"].is_array()) {
      throw Error("protocol error: malformed page at offset " + std::to_string(start_at));
    }
    const auto& issues = page["issues"];
    for (const auto& issue : issues) records.push_back(issue);
    start_at += static_cast<long long>(issues.size());
    const long long total = page.value("total", start_at);
    if (issues.empty() || start_at >= total) break;
  }
  logger().info("fetched {} issues of {} in {} requests", records.size(), config.project_key, st.requests);
  return records;
}

std::vector<RawIssueRecord> load_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw Error("dump parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("issues")) doc = doc["issues"];
  if (!doc.is_array()) throw Error("dump must be a JSON array of issues");
  return std::vector<RawIssueRecord>(doc.begin(), doc.end());
}

LinkTypeTable LinkTypeTable::bundled() { return from_tsv(resources::link_types()); }

LinkTypeTable LinkTypeTable::from_tsv(std::string_view text) {
  LinkTypeTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      table.add(line, line);
    } else {
      table.add(line.substr(0, tab), line.substr(tab + 1));
    }
  }
  return table;
}

void LinkTypeTable::add(const std::string& outward, const std::string& inward) {
  inward_of_[outward] = inward;
  if (inward != outward) outward_of_[inward] = outward;
}

std::optional<std::string> LinkTypeTable::outward_of(const std::string& inward) const {
  const auto it = outward_of_.find(inward);
  if (it == outward_of_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string text_field(const json& fields, const char* key) {
  if (!fields.contains(key) || fields[key].is_null()) return {};
  const auto& v = fields[key];
  if (v.is_string()) return v.get<std::string>();
  if (v.is_object()) {
    for (const char* name : {"name", "displayName", "key", "value"}) {
      if (v.contains(name) && v[name].is_string()) return v[name].get<std::string>();
    }
  }
  return v.dump();
}

std::string record_key(const json& record) {
  if (record.contains("key") && record["key"].is_string()) return record["key"].get<std::string>();
  if (record.contains("id")) {
    return record["id"].is_string() ? record["id"].get<std::string>() : record["id"].dump();
  }
  throw Error("issue record without id or key");
}

std::string linked_key(const json& side) {
  if (side.is_string()) return side.get<std::string>();
  return record_key(side);
}

/// Outward label of an issuelinks entry.
std::string outward_label(const json& entry, const LinkTypeTable& types) {
  const json type = entry.value("type", json::object());
  if (type.contains("outward") && type["outward"].is_string()) return type["outward"].get<std::string>();
  std::string label;
  if (type.contains("inward") && type["inward"].is_string()) {
    label = type["inward"].get<std::string>();
  } else if (type.contains("name") && type["name"].is_string()) {
    label = type["name"].get<std::string>();
  } else if (entry.contains("label") && entry["label"].is_string()) {
    label = entry["label"].get<std::string>();
  }
  if (auto outward = types.outward_of(label)) return *outward;
  return label;
}

Issue issue_from_record(const json& record) {
  const json fields = record.value("fields", json::object());
  Issue issue;
  issue.id = record_key(record);
  issue.summary = text_field(fields, "summary");
  issue.description = text_field(fields, "description");
  issue.issue_type = text_field(fields, "issuetype");
  issue.status = text_field(fields, "status");
  const std::string created = text_field(fields, "created");
  if (created.empty()) throw Error("issue " + issue.id + " has no creation timestamp");
  issue.created = parse_timestamp(created);
  const std::string assignee = text_field(fields, "assignee");
  if (!assignee.empty()) issue.assignee = assignee;
  issue.reporter = text_field(fields, "reporter");
  issue.project = text_field(fields, "project");
  if (issue.project.empty()) {
    const auto dash = issue.id.rfind('-');
    issue.project = dash == std::string::npos ? std::string() : issue.id.substr(0, dash);
  }
  return issue;
}

}  // namespace

ProjectDataset canonicalize_links(const std::vector<RawIssueRecord>& records, IngestionReport* report,
                                  const LinkTypeTable& types) {
  IngestionReport local;
  IngestionReport& rep = report ? *report : local;
  ProjectDataset dataset;
  std::set<std::string> keys;
  for (const auto& record : records) {
    Issue issue = issue_from_record(record);
    if (!keys.insert(issue.id).second) {
      rep.messages.push_back("duplicate record " + issue.id + " ignored");
      continue;
    }
    dataset.issues.push_back(std::move(issue));
  }
  if (!dataset.issues.empty()) dataset.project = dataset.issues.front().project;

  // Outward entries define the links; inward entries only confirm them.
  std::set<IssueLink> outward_claims;
  std::vector<IssueLink> inward_claims;
  for (const auto& record : records) {
    const std::string self = record_key(record);
    const json fields = record.value("fields", json::object());
    if (!fields.contains("issuelinks") || !fields["issuelinks"].is_array()) continue;
    for (const auto& entry : fields["issuelinks"]) {
      const bool outward = entry.contains("outwardIssue");
      if (!outward && !entry.contains("inwardIssue")) {
        rep.messages.push_back("issuelink of " + self + " has no endpoint");
        continue;
      }
      const std::string other = linked_key(outward ? entry["outwardIssue"] : entry["inwardIssue"]);
      IssueLink link = outward ? IssueLink{self, other, outward_label(entry, types)}
                               : IssueLink{other, self, outward_label(entry, types)};
      if (!keys.contains(other)) {
        ++rep.external_drops;
        continue;
      }
      if (link.source == link.target) {
        ++rep.self_links;
        continue;
      }
      if (outward) {
        if (!outward_claims.insert(link).second) ++rep.duplicates;
      } else {
        inward_claims.push_back(std::move(link));
      }
    }
  }
  for (const auto& link : inward_claims) {
    if (!outward_claims.contains(link)) {
      ++rep.disagreements;
      rep.messages.push_back("inward entry " + link.source + " -> " + link.target + " '" + link.label +
                             "' has no outward counterpart; outward record trusted");
    }
  }
  dataset.links.assign(outward_claims.begin(), outward_claims.end());
  if (rep.external_drops > 0) logger().info("dropped {} links to issues outside the record set", rep.external_drops);
  for (const auto& m : rep.messages) log_warn(m);
  return dataset;
}

}  // namespace linklab
