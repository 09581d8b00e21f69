#include "linklab/smote.hpp"

#include "linklab/log.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace linklab {

SmoteResult smote_oversample(const FeatureMatrix& X, const ClassCodes& y, int k, std::uint64_t seed) {
  if (k < 1) throw Error("SMOTE k must be at least 1");
  if (static_cast<std::size_t>(X.rows()) != y.size()) throw Error("SMOTE: feature rows and labels differ in length");
  std::map<int, std::vector<Eigen::Index>> members;
  for (std::size_t i = 0; i < y.size(); ++i) members[y[i]].push_back(static_cast<Eigen::Index>(i));
  if (members.size() < 2) throw Error("SMOTE needs at least two classes");

  std::size_t majority = 0;
  for (const auto& [c, rows] : members) majority = std::max(majority, rows.size());

  std::size_t extra = 0;
  for (const auto& [c, rows] : members) extra += majority - rows.size();

  SmoteResult out;
  out.X.resize(X.rows() + static_cast<Eigen::Index>(extra), X.cols());
  out.X.topRows(X.rows()) = X;
  out.y = y;
  out.y.reserve(y.size() + extra);
  out.origins.reserve(extra);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::Index next = X.rows();

  for (const auto& [c, rows] : members) {
    const std::size_t need = majority - rows.size();
    if (need == 0) continue;
    if (rows.size() == 1) {
      log_warn("SMOTE: class " + std::to_string(c) + " has a single sample; duplicating it");
      for (std::size_t s = 0; s < need; ++s) {
        out.X.row(next++) = X.row(rows[0]);
        out.y.push_back(c);
        out.origins.push_back({rows[0], rows[0], 0.0});
      }
      continue;
    }
    const int k_eff = std::min<int>(k, static_cast<int>(rows.size()) - 1);

    // k nearest same-class neighbours of each member; index order breaks distance ties.
    FeatureMatrix cls(static_cast<Eigen::Index>(rows.size()), X.cols());
    for (std::size_t a = 0; a < rows.size(); ++a) cls.row(static_cast<Eigen::Index>(a)) = X.row(rows[a]);
    const FeatureMatrix gram = cls * cls.transpose();
    std::vector<std::vector<Eigen::Index>> neighbours(rows.size());
    std::vector<std::pair<double, std::size_t>> dist(rows.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
      const auto ia = static_cast<Eigen::Index>(a);
      for (std::size_t b = 0; b < rows.size(); ++b) {
        const auto ib = static_cast<Eigen::Index>(b);
        dist[b] = {b == a ? std::numeric_limits<double>::infinity()
                          : std::max(0.0, gram(ia, ia) + gram(ib, ib) - 2.0 * gram(ia, ib)),
                   b};
      }
      std::partial_sort(dist.begin(), dist.begin() + k_eff, dist.end());
      for (int j = 0; j < k_eff; ++j) neighbours[a].push_back(rows[dist[static_cast<std::size_t>(j)].second]);
    }

    std::uniform_int_distribution<std::size_t> pick_base(0, rows.size() - 1);
    std::uniform_int_distribution<int> pick_nn(0, k_eff - 1);
    for (std::size_t s = 0; s < need; ++s) {
      const std::size_t a = pick_base(rng);
      const Eigen::Index nn = neighbours[a][static_cast<std::size_t>(pick_nn(rng))];
      const double gap = unit(rng);
      out.X.row(next++) = X.row(rows[a]) + gap * (X.row(nn) - X.row(rows[a]));
      out.y.push_back(c);
      out.origins.push_back({rows[a], nn, gap});
    }
  }
  return out;
}

}  // namespace linklab
