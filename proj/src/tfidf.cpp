#include "linklab/tfidf.hpp"

#include <cmath>
#include <set>

namespace linklab {

double TfidfModel::idf(int index) const {
  return std::log((1.0 + n_documents) / (1.0 + doc_frequency[static_cast<std::size_t>(index)])) + 1.0;
}

FeatureVector TfidfModel::encode_document(const TokenList& tokens) const {
  FeatureVector v = FeatureVector::Zero(size());
  for (const auto& t : tokens) {
    if (auto it = vocabulary.find(t); it != vocabulary.end()) v[it->second] += 1.0;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) v[i] *= idf(static_cast<int>(i));
  }
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

TfidfModel fit_tfidf(const std::vector<TokenizedIssue>& corpus) {
  if (corpus.empty()) throw Error("cannot fit TF-IDF on an empty corpus");
  std::map<std::string, int> df;
  for (const auto& issue : corpus) {
    for (const auto* field : {&issue.summary_tokens, &issue.description_tokens}) {
      const std::set<std::string> unique(field->begin(), field->end());
      for (const auto& t : unique) ++df[t];
    }
  }
  TfidfModel model;
  model.n_documents = static_cast<int>(2 * corpus.size());
  model.doc_frequency.reserve(df.size());
  int index = 0;
  for (const auto& [token, count] : df) {
    model.vocabulary.emplace(token, index++);
    model.doc_frequency.push_back(count);
  }
  return model;
}

FeatureVector encode_issue_tfidf(const TfidfModel& model, const TokenizedIssue& issue) {
  const int n = model.size();
  FeatureVector out(2 * n);
  out.head(n) = model.encode_document(issue.summary_tokens);
  out.tail(n) = model.encode_document(issue.description_tokens);
  return out;
}

}  // namespace linklab
