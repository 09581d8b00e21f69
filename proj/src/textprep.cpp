#include "linklab/textprep.hpp"

#include "linklab/resources.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace linklab {

namespace {

bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower_or_digit(char c) {
  return std::islower(static_cast<unsigned char>(c)) != 0 || std::isdigit(static_cast<unsigned char>(c)) != 0;
}
bool is_alnum(char c) {
  // ASCII only: bytes of multi-byte UTF-8 sequences count as separators.
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::isalnum(u) != 0;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open '" + p.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

NormalizationConfig NormalizationConfig::from_text(std::string_view stopword_text, std::string_view lemma_text) {
  NormalizationConfig cfg;
  std::istringstream sw{std::string(stopword_text)};
  for (std::string line; std::getline(sw, line);) {
    auto t = lowercase(trim(line));
    if (!t.empty() && t[0] != '#') cfg.stopwords.insert(std::move(t));
  }
  std::istringstream lm{std::string(lemma_text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(lm, line);) {
    ++line_no;
    if (trim(line).empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error("lemma table line " + std::to_string(line_no) + ": expected token<TAB>lemma");
    cfg.lemmas.emplace(lowercase(trim(line.substr(0, tab))), lowercase(trim(line.substr(tab + 1))));
  }
  return cfg;
}

NormalizationConfig NormalizationConfig::bundled() {
  return from_text(resources::stopwords(), resources::lemmas());
}

NormalizationConfig NormalizationConfig::from_files(const std::filesystem::path& stopword_file,
                                                    const std::filesystem::path& lemma_file) {
  const std::string sw = stopword_file.empty() ? std::string(resources::stopwords()) : read_file(stopword_file);
  const std::string lm = lemma_file.empty() ? std::string(resources::lemmas()) : read_file(lemma_file);
  return from_text(sw, lm);
}

TokenList split_camel_case(std::string_view token) {
  TokenList parts;
  std::size_t start = 0;
  for (std::size_t i = 1; i < token.size(); ++i) {
    const bool lower_to_upper = is_lower_or_digit(token[i - 1]) && is_upper(token[i]);
    const bool run_end = is_upper(token[i - 1]) && is_upper(token[i]) && i + 1 < token.size() &&
                         std::islower(static_cast<unsigned char>(token[i + 1])) != 0;
    if (lower_to_upper || run_end) {
      parts.push_back(lowercase(token.substr(start, i - start)));
      start = i;
    }
  }
  if (start < token.size()) parts.push_back(lowercase(token.substr(start)));
  return parts;
}

TokenList normalize_text(std::string_view text, const NormalizationConfig& config) {
  TokenList out;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    for (auto& piece : split_camel_case(word)) {
      if (config.stopwords.contains(piece)) continue;
      if (auto it = config.lemmas.find(piece); it != config.lemmas.end()) {
        out.push_back(it->second);
      } else {
        out.push_back(std::move(piece));
      }
    }
    word.clear();
  };
  for (char c : text) {
    if (is_alnum(c)) {
      word.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

TokenizedIssue preprocess_issue(const Issue& issue, const NormalizationConfig& config) {
  return {issue.id, normalize_text(issue.summary, config), normalize_text(issue.description, config)};
}

std::vector<TokenizedIssue> preprocess_issues(const std::vector<Issue>& issues, const NormalizationConfig& config) {
  std::vector<TokenizedIssue> out;
  out.reserve(issues.size());
  for (const auto& issue : issues) out.push_back(preprocess_issue(issue, config));
  return out;
}

}  // namespace linklab
