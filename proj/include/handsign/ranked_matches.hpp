#pragma once

#include <string>
#include <vector>

namespace handsign {

struct Match {
  std::string label;
  double percentage = 0.0;  // [0, 100]
  double distance = 0.0;    // >= 0, smaller is closer
};

/// Classifier output: every label once, best first, percentages summing to 100.
struct RankedMatches {
  std::vector<Match> entries;

  const Match& top() const { return entries.front(); }
  bool empty() const noexcept { return entries.empty(); }
};

/// Normalizes non-negative scores into percentages and sorts by percentage
/// descending, then distance ascending. Remaining ties keep input order.
RankedMatches rank_scores(const std::vector<std::string>& labels, const std::vector<double>& scores,
                          const std::vector<double>& distances);

}  // namespace handsign
