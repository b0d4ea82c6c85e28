#pragma once

#include <map>

#include "fundnet/graph.hpp"

namespace fundnet {

enum class DegreeKind { In, Out, BipartiteFund, BipartiteAsset };

/// degree -> node count; counts sum to the node count of the relevant kind.
std::map<int, int> degree_histogram(const DirectedWeightedGraph& g,
                                    DegreeKind kind);
std::map<int, int> degree_histogram(const BipartiteGraph& g, DegreeKind kind);

}  // namespace fundnet
