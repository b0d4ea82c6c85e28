#include "fundnet/mixing.hpp"

#include <cmath>
#include <map>

#include "fundnet/errors.hpp"

namespace fundnet {

MixingMatrix mixing_matrix(const DirectedWeightedGraph& g,
                           const std::vector<std::string>& node_labels) {
  if (static_cast<int>(node_labels.size()) != g.node_count())
    throw UnlabeledNode("label list has " +
                        std::to_string(node_labels.size()) + " entries for " +
                        std::to_string(g.node_count()) + " nodes");
  for (int u = 0; u < g.node_count(); ++u) {
    if (node_labels[u].empty())
      throw UnlabeledNode("node " + std::to_string(u) + " has no label");
  }
  if (g.edge_count() == 0)
    throw DegenerateGraph("mixing matrix needs at least one edge");

  std::map<std::string, int> ids;  // ordered: label order is deterministic
  for (const std::string& l : node_labels) ids.emplace(l, 0);
  int next = 0;
  for (auto& [label, id] : ids) id = next++;

  MixingMatrix m;
  m.labels.resize(ids.size());
  for (const auto& [label, id] : ids) m.labels[id] = label;
  m.entries = Mat::Zero(next, next);
  const Scalar share = 1.0 / static_cast<Scalar>(g.edge_count());
  for (const Edge& e : g.edges())
    m.entries(ids.at(node_labels[e.tail]), ids.at(node_labels[e.head])) +=
        share;
  m.tail_marginals = m.entries.rowwise().sum();
  m.head_marginals = m.entries.colwise().sum().transpose();
  return m;
}

Scalar assortativity(const MixingMatrix& m) {
  const Scalar trace = m.entries.trace();
  const Scalar ab = m.tail_marginals.dot(m.head_marginals);
  const Scalar denom = 1.0 - ab;
  if (std::abs(denom) < 1e-12)
    throw DegenerateLabels(
        "assortativity undefined: a single effective label");
  return (trace - ab) / denom;
}

Scalar assortativity(const DirectedWeightedGraph& g,
                     const std::vector<std::string>& node_labels) {
  return assortativity(mixing_matrix(g, node_labels));
}

}  // namespace fundnet
