#pragma once

#include <optional>

#include "fundnet/graph.hpp"
#include "fundnet/types.hpp"

namespace fundnet {

/// How source/target pairs are counted in betweenness. Undirected halves
/// the accumulated sums and expects a symmetric edge set (each undirected
/// edge stored as two arcs).
enum class PairCounting { Directed, Undirected };

/// In/out connection counts per node (the degree centrality measure; raw
/// counts, normalization by n-1 happens only in reports).
inline Degrees degree_centrality(const DirectedWeightedGraph& g) {
  return degrees(g);
}

/// Incoming closeness of node u over unweighted directed shortest paths
/// d(v, u), with the reachable-set correction (r-1)/(n-1) applied when not
/// every node reaches u. Nodes nobody reaches score 0.
Scalar closeness_centrality(const DirectedWeightedGraph& g, int u);

Vec closeness_all(const DirectedWeightedGraph& g);

/// Brandes betweenness over unweighted directed shortest paths; pairs with
/// no connecting path contribute 0. Deterministic for any jobs count: each
/// source's contribution is accumulated in source order.
Vec betweenness_centrality(const DirectedWeightedGraph& g,
                           PairCounting counting = PairCounting::Directed,
                           int jobs = 1);

/// Shortest-path counts sigma(s, t) for every ordered pair, exposed for
/// cross-checking against exhaustive path enumeration.
Mat shortest_path_counts(const DirectedWeightedGraph& g);

struct EigenvectorResult {
  Vec centrality;    // unit Euclidean norm, entrywise >= 0
  Scalar eigenvalue = 0.0;
  int iterations = 0;
};

/// Principal eigenvector of the transposed (incoming-orientation) adjacency
/// by power iteration from a uniform start. Converges when successive
/// iterates differ by < tol in max-norm; throws NoConvergence on periodic
/// or nilpotent structure.
EigenvectorResult eigenvector_centrality(const DirectedWeightedGraph& g,
                                         Weighting weighting = Weighting::Weighted,
                                         int max_iterations = 1000,
                                         Scalar tol = 1e-10);

struct CentralityReport {
  Eigen::VectorXi degree_in;
  Eigen::VectorXi degree_out;
  Vec closeness;
  Vec betweenness;
  std::optional<Vec> eigenvector;  // empty when power iteration failed
  Scalar eigenvalue = 0.0;
  int eigenvector_iterations = 0;
  bool weakly_connected = true;  // eigenvector support depends on the
                                 // start vector when false

  int max_degree_in() const {
    return degree_in.size() ? degree_in.maxCoeff() : 0;
  }
  int max_degree_out() const {
    return degree_out.size() ? degree_out.maxCoeff() : 0;
  }
  Scalar max_closeness() const {
    return closeness.size() ? closeness.maxCoeff() : 0.0;
  }
  Scalar max_betweenness() const {
    return betweenness.size() ? betweenness.maxCoeff() : 0.0;
  }
  Scalar max_eigenvector() const {
    return eigenvector && eigenvector->size() ? eigenvector->maxCoeff() : 0.0;
  }
};

CentralityReport centrality_report(const DirectedWeightedGraph& g,
                                   PairCounting counting = PairCounting::Directed,
                                   int jobs = 1);

}  // namespace fundnet
