#include "fundnet/histogram.hpp"

#include "fundnet/errors.hpp"

namespace fundnet {

std::map<int, int> degree_histogram(const DirectedWeightedGraph& g,
                                    DegreeKind kind) {
  if (kind != DegreeKind::In && kind != DegreeKind::Out)
    throw DegenerateGraph("bipartite degree kind on a digraph");
  std::map<int, int> hist;
  for (int u = 0; u < g.node_count(); ++u)
    ++hist[kind == DegreeKind::In ? g.in_degree(u) : g.out_degree(u)];
  return hist;
}

std::map<int, int> degree_histogram(const BipartiteGraph& g, DegreeKind kind) {
  std::map<int, int> hist;
  if (kind == DegreeKind::BipartiteFund) {
    for (int f = 0; f < g.fund_count(); ++f) ++hist[g.fund_degree(f)];
  } else if (kind == DegreeKind::BipartiteAsset) {
    for (int a = 0; a < g.asset_count(); ++a) ++hist[g.asset_degree(a)];
  } else {
    throw DegenerateGraph("digraph degree kind on a bipartite graph");
  }
  return hist;
}

}  // namespace fundnet
