#include "linklab/dataset.hpp"

#include "linklab/log.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace linklab {

using nlohmann::json;

namespace {

int parse_digits(const std::string& s, std::size_t pos, std::size_t n) {
  if (pos + n > s.size()) throw Error("bad timestamp '" + s + "'");
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw Error("bad timestamp '" + s + "'");
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

Timestamp parse_timestamp(const std::string& text) {
  using namespace std::chrono;
  const std::string& s = text;
  // YYYY-MM-DD
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') throw Error("bad timestamp '" + s + "'");
  const year_month_day ymd{year{parse_digits(s, 0, 4)}, month{static_cast<unsigned>(parse_digits(s, 5, 2))},
                           day{static_cast<unsigned>(parse_digits(s, 8, 2))}};
  if (!ymd.ok()) throw Error("bad timestamp '" + s + "'");
  seconds tod{0};
  seconds offset{0};
  std::size_t pos = 10;
  if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
    const int hh = parse_digits(s, pos + 1, 2);
    if (pos + 3 >= s.size() || s[pos + 3] != ':') throw Error("bad timestamp '" + s + "'");
    const int mm = parse_digits(s, pos + 4, 2);
    int ss = 0;
    pos += 6;
    if (pos < s.size() && s[pos] == ':') {
      ss = parse_digits(s, pos + 1, 2);
      pos += 3;
    }
    if (hh > 23 || mm > 59 || ss > 60) throw Error("bad timestamp '" + s + "'");
    tod = hours{hh} + minutes{mm} + seconds{ss};
    if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
      ++pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    if (pos < s.size()) {
      if (s[pos] == 'Z') {
        ++pos;
      } else if (s[pos] == '+' || s[pos] == '-') {
        const int sign = s[pos] == '+' ? 1 : -1;
        const int oh = parse_digits(s, pos + 1, 2);
        std::size_t p = pos + 3;
        if (p < s.size() && s[p] == ':') ++p;
        const int om = parse_digits(s, p, 2);
        offset = sign * (hours{oh} + minutes{om});
        pos = p + 2;
      }
    }
  }
  if (pos != s.size()) throw Error("bad timestamp '" + s + "'");
  return sys_days{ymd} + tod - offset;
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss<seconds> tod{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

double days_between(Timestamp a, Timestamp b) {
  return static_cast<double>((a - b).count()) / 86400.0;
}

std::optional<std::size_t> ProjectDataset::find_issue(const std::string& id) const {
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (issues[i].id == id) return i;
  }
  return std::nullopt;
}

ValidationReport validate_dataset(const ProjectDataset& dataset, std::optional<Timestamp> snapshot) {
  ValidationReport report;
  const Timestamp limit =
      snapshot.value_or(std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));

  std::unordered_set<std::string> ids;
  for (const auto& issue : dataset.issues) {
    if (!ids.insert(issue.id).second) {
      report.push_back({ViolationKind::DuplicateIssueId, issue.id, "duplicate issue id '" + issue.id + "'"});
    }
    if (issue.created > limit) {
      report.push_back({ViolationKind::FutureTimestamp, issue.id,
                        "issue '" + issue.id + "' created after snapshot (" + format_timestamp(issue.created) + ")"});
    }
  }

  std::set<IssueLink> seen;
  for (const auto& link : dataset.links) {
    const std::string subject = link.source + "->" + link.target + ":" + link.label;
    if (link.source == link.target) {
      report.push_back({ViolationKind::SelfLink, subject, "self-link on '" + link.source + "'"});
    }
    for (const auto* end : {&link.source, &link.target}) {
      if (!ids.contains(*end)) {
        report.push_back({ViolationKind::DanglingEndpoint, subject, "link endpoint '" + *end + "' is not an issue"});
      }
    }
    if (link.label.empty()) {
      report.push_back({ViolationKind::EmptyLabel, subject, "link has an empty label"});
    }
    if (!seen.insert(link).second) {
      report.push_back({ViolationKind::DuplicateLink, subject, "duplicate link " + subject});
    }
  }
  return report;
}

std::map<std::string, LabelShare> label_distribution(const LabelList& labels) {
  std::map<std::string, LabelShare> out;
  for (const auto& l : labels) ++out[l].count;
  const double total = static_cast<double>(labels.size());
  for (auto& [label, share] : out) share.fraction = static_cast<double>(share.count) / total;
  return out;
}

LabelList link_labels(const ProjectDataset& dataset) {
  LabelList labels;
  labels.reserve(dataset.links.size());
  for (const auto& l : dataset.links) labels.push_back(l.label);
  return labels;
}

std::map<std::string, LabelShare> label_distribution(const ProjectDataset& dataset) {
  return label_distribution(link_labels(dataset));
}

ProjectDataset filter_labels(const ProjectDataset& dataset, const LabelFilterPolicy& policy) {
  const auto dist = label_distribution(dataset);
  std::set<std::string> kept;
  for (const auto& [label, share] : dist) {
    const bool too_rare = static_cast<int>(share.count) < policy.min_count || share.fraction < policy.min_fraction;
    if (!too_rare) kept.insert(label);
  }
  ProjectDataset out;
  out.project = dataset.project;
  out.issues = dataset.issues;
  for (const auto& link : dataset.links) {
    if (kept.contains(link.label)) out.links.push_back(link);
  }
  return out;
}

double linked_issue_ratio(const ProjectDataset& dataset) {
  if (dataset.issues.empty()) throw Error("empty dataset");
  std::unordered_set<std::string> linked;
  for (const auto& l : dataset.links) {
    linked.insert(l.source);
    linked.insert(l.target);
  }
  std::size_t n = 0;
  for (const auto& issue : dataset.issues) n += linked.contains(issue.id) ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(dataset.issues.size());
}

std::string majority_label(const LabelList& labels) {
  if (labels.empty()) throw Error("majority of an empty label list");
  const auto dist = label_distribution(labels);
  // std::map iterates lexicographically, so strict > keeps the smallest label on ties.
  auto best = dist.begin();
  for (auto it = dist.begin(); it != dist.end(); ++it) {
    if (it->second.count > best->second.count) best = it;
  }
  return best->first;
}

double analytic_zeror_f1(const LabelList& labels) {
  const auto dist = label_distribution(labels);
  const double p = dist.at(majority_label(labels)).fraction;
  return p * 2.0 * p / (1.0 + p);
}

// --- JSON --------------------------------------------------------------------

namespace {

json issue_to_json(const Issue& issue) {
  json j;
  j["id"] = issue.id;
  j["summary"] = issue.summary;
  j["description"] = issue.description;
  j["type"] = issue.issue_type;
  j["status"] = issue.status;
  j["created"] = format_timestamp(issue.created);
  j["assignee"] = issue.assignee ? json(*issue.assignee) : json(nullptr);
  j["reporter"] = issue.reporter;
  return j;
}

std::string string_or_empty(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) throw Error(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

Issue issue_from_json(const json& j, const std::string& project) {
  Issue issue;
  issue.id = j.at("id").get<std::string>();
  issue.summary = string_or_empty(j, "summary");
  issue.description = string_or_empty(j, "description");
  issue.issue_type = string_or_empty(j, "type");
  issue.status = string_or_empty(j, "status");
  issue.created = parse_timestamp(j.at("created").get<std::string>());
  if (auto it = j.find("assignee"); it != j.end() && !it->is_null()) issue.assignee = it->get<std::string>();
  issue.reporter = string_or_empty(j, "reporter");
  issue.project = project;
  return issue;
}

}  // namespace

std::string dataset_to_json(const ProjectDataset& dataset) {
  json j;
  j["project"] = dataset.project;
  j["issues"] = json::array();
  for (const auto& issue : dataset.issues) j["issues"].push_back(issue_to_json(issue));
  j["links"] = json::array();
  for (const auto& l : dataset.links) j["links"].push_back({{"source", l.source}, {"target", l.target}, {"label", l.label}});
  return j.dump(1, ' ', false, json::error_handler_t::replace) + "\n";
}

ProjectDataset dataset_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("dataset parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  try {
    ProjectDataset d;
    d.project = j.at("project").get<std::string>();
    for (const auto& ji : j.at("issues")) d.issues.push_back(issue_from_json(ji, d.project));
    for (const auto& jl : j.at("links")) {
      d.links.push_back({jl.at("source").get<std::string>(), jl.at("target").get<std::string>(),
                         jl.at("label").get<std::string>()});
    }
    return d;
  } catch (const json::exception& e) {
    throw Error(std::string("dataset schema error: ") + e.what());
  }
}

ProjectDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dataset '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return dataset_from_json(buf.str());
}

void save_dataset(const ProjectDataset& dataset, const std::filesystem::path& path) {
  const std::string text = dataset_to_json(dataset);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write dataset '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw Error("I/O error writing '" + path.string() + "'");
}

CorpusRatioStats linked_ratio_over_directory(const std::filesystem::path& dir) {
  CorpusRatioStats stats;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<double> ratios;
  for (const auto& f : files) {
    const auto d = load_dataset(f);
    if (d.issues.empty()) {
      log_warn("skipping empty dataset " + f.string());
      continue;
    }
    const double r = linked_issue_ratio(d);
    stats.per_project[d.project] = r;
    ratios.push_back(r);
  }
  stats.projects = ratios.size();
  if (ratios.empty()) return stats;
  double sum = 0.0;
  for (double r : ratios) sum += r;
  stats.mean = sum / static_cast<double>(ratios.size());
  double var = 0.0;
  for (double r : ratios) var += (r - stats.mean) * (r - stats.mean);
  stats.stddev = std::sqrt(var / static_cast<double>(ratios.size()));
  return stats;
}

}  // namespace linklab
