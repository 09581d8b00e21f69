#pragma once

#include "linklab/textprep.hpp"
#include "linklab/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace linklab {

/// TF-IDF vocabulary fitted over issue fields. Summary and description of each
/// issue count as two separate documents.
struct TfidfModel {
  std::map<std::string, int> vocabulary;  // token -> dense index in [0, N)
  std::vector<int> doc_frequency;         // indexed like vocabulary
  int n_documents = 0;

  int size() const { return static_cast<int>(vocabulary.size()); }

  /// Smoothed inverse document frequency ln((1+n)/(1+df)) + 1.
  double idf(int index) const;

  /// TF-IDF of one document, L2-normalised; all-zero when no known token occurs.
  FeatureVector encode_document(const TokenList& tokens) const;

  bool operator==(const TfidfModel&) const = default;
};

TfidfModel fit_tfidf(const std::vector<TokenizedIssue>& corpus);

/// Concatenated [summary | description] TF-IDF, length 2N.
FeatureVector encode_issue_tfidf(const TfidfModel& model, const TokenizedIssue& issue);

}  // namespace linklab
