#pragma once

#include "linklab/dataset.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace linklab {

using TokenList = std::vector<std::string>;

struct NormalizationConfig {
  std::unordered_set<std::string> stopwords;
  std::unordered_map<std::string, std::string> lemmas;

  /// Bundled English stopwords and lemma table.
  static NormalizationConfig bundled();
  /// Loads a stopword file (one token per line) and a lemma file (`token<TAB>lemma`).
  /// Either path may be empty to select the bundled resource.
  static NormalizationConfig from_files(const std::filesystem::path& stopword_file,
                                        const std::filesystem::path& lemma_file);
  static NormalizationConfig from_text(std::string_view stopword_text, std::string_view lemma_text);
};

struct TokenizedIssue {
  std::string id;
  TokenList summary_tokens;
  TokenList description_tokens;
};

/// Splits at lower/digit→upper boundaries and before the last capital of an
/// uppercase run that is followed by lowercase. Output is lowercased.
TokenList split_camel_case(std::string_view token);

/// Replace non-alphanumerics, split on whitespace, split camel case, lowercase,
/// drop stopwords, then map through the lemma table.
TokenList normalize_text(std::string_view text, const NormalizationConfig& config);

TokenizedIssue preprocess_issue(const Issue& issue, const NormalizationConfig& config);

std::vector<TokenizedIssue> preprocess_issues(const std::vector<Issue>& issues, const NormalizationConfig& config);

}  // namespace linklab
