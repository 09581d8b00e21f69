#include "linklab/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <random>
#include <set>
#include <sstream>

namespace linklab {

std::string to_string(SyntheticRule rule) {
  return rule == SyntheticRule::TypePair ? "type-pair" : "type-pair-shared";
}

SyntheticRule parse_synthetic_rule(const std::string& name) {
  if (name == "type-pair") return SyntheticRule::TypePair;
  if (name == "type-pair-shared") return SyntheticRule::TypePairSharedTokens;
  throw UsageError("unknown synthetic rule '" + name + "'");
}

const std::vector<std::string>& synthetic_issue_types() {
  static const std::vector<std::string> types{"Bug", "Improvement", "New Feature", "Task", "Sub-task", "Test"};
  return types;
}

LabelList synthetic_label_names(int n) {
  static const std::array<const char*, 10> known{"relates to", "duplicates",    "blocks", "depends upon",
                                                 "requires",   "contains",      "breaks", "is a clone of",
                                                 "incorporates", "supercedes"};
  if (n < 2) throw UsageError("synthetic datasets need at least 2 labels");
  LabelList out;
  for (int i = 0; i < n; ++i) {
    out.push_back(i < static_cast<int>(known.size()) ? std::string(known[static_cast<std::size_t>(i)])
                                                     : "label-" + std::to_string(i));
  }
  return out;
}

namespace {

std::set<std::string> summary_words(const std::string& summary) {
  std::set<std::string> words;
  std::istringstream in(summary);
  std::string w;
  while (in >> w) {
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
    words.insert(w);
  }
  return words;
}

int type_position(const std::string& type) {
  const auto& types = synthetic_issue_types();
  const auto it = std::find(types.begin(), types.end(), type);
  return it == types.end() ? 0 : static_cast<int>(it - types.begin());
}

// Words that characterise each issue type, indexed like synthetic_issue_types().
const std::array<std::vector<std::string>, 6> kTypeWords{{
    {"crash", "error", "exception", "broken", "failure", "regression", "wrong", "hang"},
    {"improve", "faster", "cleanup", "refactor", "simplify", "optimize", "polish", "tune"},
    {"feature", "support", "introduce", "new", "enable", "provide", "extend", "allow"},
    {"task", "update", "upgrade", "migrate", "document", "release", "bump", "prepare"},
    {"subtask", "part", "step", "piece", "portion", "followup", "phase", "stage"},
    {"test", "coverage", "flaky", "unit", "integration", "assert", "mock", "fixture"},
}};

const std::vector<std::string> kGenericWords{"please", "currently", "when", "user", "value", "option", "page",
                                             "file", "config", "version", "log", "message", "result", "server"};

// Component vocabularies: pseudo-words from fixed syllables, one block per topic.
std::vector<std::vector<std::string>> topic_words(int topics, int per_topic) {
  static const std::array<const char*, 12> onset{"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t"};
  static const std::array<const char*, 5> vowel{"a", "e", "i", "o", "u"};
  std::vector<std::vector<std::string>> out(static_cast<std::size_t>(topics));
  int code = 0;
  for (auto& block : out) {
    for (int w = 0; w < per_topic; ++w, ++code) {
      std::string word;
      int c = code * 7 + 3;
      for (int syl = 0; syl < 3; ++syl) {
        word += onset[static_cast<std::size_t>(c % 12)];
        word += vowel[static_cast<std::size_t>((c / 12) % 5)];
        c = c / 7 + syl * 11 + 5;
      }
      block.push_back(word + "x" + std::to_string(code));
    }
  }
  return out;
}

}  // namespace

std::string rule_label(SyntheticRule rule, const LabelList& labels, const Issue& source, const Issue& target) {
  int index = type_position(source.issue_type) + 2 * type_position(target.issue_type);
  if (rule == SyntheticRule::TypePairSharedTokens) {
    const auto a = summary_words(source.summary);
    const auto b = summary_words(target.summary);
    std::size_t shared = 0;
    for (const auto& w : a) shared += b.count(w);
    if (shared >= 2) index += 3;
  }
  return labels[static_cast<std::size_t>(index) % labels.size()];
}

ProjectDataset generate_synthetic(const SyntheticOptions& options) {
  if (options.n_issues < 2) throw UsageError("synthetic datasets need at least 2 issues");
  if (options.noise < 0.0 || options.noise > 1.0) throw UsageError("noise must lie in [0, 1]");
  const LabelList labels = synthetic_label_names(options.n_labels);
  const int n_links = options.n_links < 0 ? options.n_issues : options.n_links;
  const long long max_pairs = static_cast<long long>(options.n_issues) * (options.n_issues - 1) / 2;
  if (n_links > max_pairs) throw UsageError("more links requested than issue pairs exist");

  std::mt19937_64 rng(options.seed);
  std::discrete_distribution<int> type_dist({35, 25, 15, 12, 8, 5});
  constexpr int kTopics = 12;
  const auto topics = topic_words(kTopics, 10);
  std::uniform_int_distribution<int> topic_dist(0, kTopics - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&](const std::vector<std::string>& words) {
    return words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
  };
  const std::vector<std::string> people{"alice", "bob", "carol", "dave", "erin", "frank", "grace", "heidi"};
  const std::vector<std::string> reporters{"ivan", "judy", "mallory", "niaj", "olivia", "peggy", "rupert",
                                           "sybil", "trent", "victor"};

  ProjectDataset d;
  d.project = options.project;
  std::vector<int> issue_topic;
  const Timestamp start = parse_timestamp("2012-01-01T00:00:00Z");
  for (int i = 0; i < options.n_issues; ++i) {
    Issue issue;
    issue.id = options.project + "-" + std::to_string(i + 1);
    issue.project = options.project;
    const int type = type_dist(rng);
    const int topic = topic_dist(rng);
    issue_topic.push_back(topic);
    issue.issue_type = synthetic_issue_types()[static_cast<std::size_t>(type)];
    const auto& tw = kTypeWords[static_cast<std::size_t>(type)];
    const auto& cw = topics[static_cast<std::size_t>(topic)];

    std::vector<std::string> summary{pick(tw), pick(cw), pick(cw), pick(tw), pick(cw), pick(kGenericWords)};
    std::shuffle(summary.begin(), summary.end(), rng);
    std::vector<std::string> description;
    for (int w = 0; w < 12; ++w) {
      const double r = unit(rng);
      description.push_back(r < 0.4 ? pick(cw) : r < 0.7 ? pick(tw) : pick(kGenericWords));
    }
    auto join = [](const std::vector<std::string>& words) {
      std::string s;
      for (const auto& w : words) s += (s.empty() ? "" : " ") + w;
      return s;
    };
    issue.summary = join(summary);
    issue.description = join(description) + ".";
    issue.status = unit(rng) < 0.7 ? "Resolved" : "Open";
    if (unit(rng) < 0.85) issue.assignee = pick(people);
    issue.reporter = pick(reporters);
    // Roughly six hours apart with jitter; strictly increasing.
    issue.created = start + std::chrono::seconds(static_cast<long long>(i) * 21600 +
                                                 std::uniform_int_distribution<int>(0, 3600)(rng));
    d.issues.push_back(std::move(issue));
  }

  std::uniform_int_distribution<int> issue_dist(0, options.n_issues - 1);
  std::uniform_int_distribution<std::size_t> label_dist(0, labels.size() - 1);
  std::set<std::pair<int, int>> used;
  while (static_cast<int>(d.links.size()) < n_links) {
    const int a = issue_dist(rng);
    int b = issue_dist(rng);
    // Half of the links stay within one component, as real links tend to.
    if (unit(rng) < 0.5) {
      for (int tries = 0; tries < 20 && issue_topic[static_cast<std::size_t>(b)] != issue_topic[static_cast<std::size_t>(a)]; ++tries) {
        b = issue_dist(rng);
      }
    }
    if (a == b || !used.insert({std::min(a, b), std::max(a, b)}).second) continue;
    const Issue& source = d.issues[static_cast<std::size_t>(a)];
    const Issue& target = d.issues[static_cast<std::size_t>(b)];
    std::string label = rule_label(options.rule, labels, source, target);
    if (unit(rng) < options.noise) label = labels[label_dist(rng)];
    d.links.push_back({source.id, target.id, std::move(label)});
  }
  return d;
}

}  // namespace linklab
