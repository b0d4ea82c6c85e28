#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fundnet/types.hpp"

namespace fundnet {

/// One period's network membership, keyed by external identifiers so node
/// identity is stable across snapshots. Edge weights are ignored: the
/// question is whether a connection persists, not how large it is.
struct NetworkMembership {
  std::string period;
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
};

struct StabilityEntry {
  std::string period_a;
  std::string period_b;
  Scalar node_jaccard = 0.0;
  Scalar edge_jaccard = 0.0;
};

using StabilityReport = std::vector<StabilityEntry>;

/// |S ∩ T| / |S ∪ T| over two id sets; two empty sets count as identical.
Scalar jaccard_coefficient(std::vector<std::string> a,
                           std::vector<std::string> b);

/// Node and edge Jaccard coefficients for each pair of consecutive periods.
/// Throws InsufficientSnapshots when fewer than two periods are given.
StabilityReport jaccard_stability(std::span<const NetworkMembership> series);

}  // namespace fundnet
