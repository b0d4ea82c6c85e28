#include "fundnet/stability.hpp"

#include <algorithm>

#include "fundnet/errors.hpp"

namespace fundnet {

namespace {

Scalar jaccard_sorted(const std::vector<std::string>& a,
                      const std::vector<std::string>& b) {
  size_t i = 0, j = 0, both = 0, either = 0;
  while (i < a.size() && j < b.size()) {
    ++either;
    if (a[i] == b[j]) {
      ++both;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  either += (a.size() - i) + (b.size() - j);
  if (either == 0) return 1.0;  // two empty sets are identical
  return static_cast<Scalar>(both) / static_cast<Scalar>(either);
}

std::vector<std::string> edge_keys(const NetworkMembership& m) {
  std::vector<std::string> keys;
  keys.reserve(m.edges.size());
  for (const auto& [tail, head] : m.edges) keys.push_back(tail + "\x1f" + head);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

}  // namespace

Scalar jaccard_coefficient(std::vector<std::string> a,
                           std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return jaccard_sorted(a, b);
}

StabilityReport jaccard_stability(std::span<const NetworkMembership> series) {
  if (series.size() < 2)
    throw InsufficientSnapshots("stability needs at least two snapshots, got " +
                                std::to_string(series.size()));
  StabilityReport report;
  report.reserve(series.size() - 1);
  for (size_t k = 0; k + 1 < series.size(); ++k) {
    StabilityEntry e;
    e.period_a = series[k].period;
    e.period_b = series[k + 1].period;
    e.node_jaccard =
        jaccard_coefficient(series[k].nodes, series[k + 1].nodes);
    e.edge_jaccard = jaccard_sorted(edge_keys(series[k]), edge_keys(series[k + 1]));
    report.push_back(std::move(e));
  }
  return report;
}

}  // namespace fundnet
