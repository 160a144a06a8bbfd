#include "handsign/ranked_matches.hpp"

#include <algorithm>
#include <numeric>

#include "handsign/error.hpp"

namespace handsign {

RankedMatches rank_scores(const std::vector<std::string>& labels, const std::vector<double>& scores,
                          const std::vector<double>& distances) {
  if (labels.size() != scores.size() || labels.size() != distances.size()) {
    throw Error(ErrorCode::DimensionMismatch, "labels, scores and distances differ in length");
  }
  const double total = std::accumulate(scores.begin(), scores.end(), 0.0);

  RankedMatches out;
  out.entries.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double pct = total > 0.0 ? 100.0 * scores[i] / total : 100.0 / labels.size();
    out.entries.push_back({labels[i], pct, distances[i]});
  }
  std::stable_sort(out.entries.begin(), out.entries.end(), [](const Match& a, const Match& b) {
    if (a.percentage != b.percentage) return a.percentage > b.percentage;
    return a.distance < b.distance;
  });
  return out;
}

}  // namespace handsign
