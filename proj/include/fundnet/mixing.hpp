#pragma once

#include <string>
#include <vector>

#include "fundnet/graph.hpp"
#include "fundnet/types.hpp"

namespace fundnet {

/// Joint edge-label distribution: entry (i, j) is the fraction of edges
/// whose tail carries label i and head carries label j. Entries sum to 1.
struct MixingMatrix {
  Mat entries;
  Vec tail_marginals;  // a_i, row sums
  Vec head_marginals;  // b_j, column sums
  std::vector<std::string> labels;
};

MixingMatrix mixing_matrix(const DirectedWeightedGraph& g,
                           const std::vector<std::string>& node_labels);

/// Assortativity coefficient r = (sum m_ii - sum a_i b_i) / (1 - sum a_i b_i)
/// over the directed mixing matrix. Throws UnlabeledNode for missing labels
/// and DegenerateLabels when every edge carries a single effective label.
Scalar assortativity(const DirectedWeightedGraph& g,
                     const std::vector<std::string>& node_labels);

Scalar assortativity(const MixingMatrix& m);

}  // namespace fundnet
