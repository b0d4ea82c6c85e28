#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fundnet/types.hpp"

namespace fundnet {

struct Edge {
  std::int32_t tail = 0;
  std::int32_t head = 0;
  Scalar weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct BipartiteEdge {
  std::int32_t fund = 0;
  std::int32_t asset = 0;
  Scalar value = 0.0;

  friend bool operator==(const BipartiteEdge&, const BipartiteEdge&) = default;
};

/// Directed weighted graph over dense node indices 0..n-1. Immutable after
/// construction; edges are kept sorted by (tail, head) and CSR-style
/// adjacency is precomputed so metric passes never touch the edge list.
class DirectedWeightedGraph {
 public:
  DirectedWeightedGraph() = default;

  int node_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const std::int32_t> out_neighbors(int u) const {
    return {out_heads_.data() + out_offsets_[u],
            out_heads_.data() + out_offsets_[u + 1]};
  }
  std::span<const std::int32_t> in_neighbors(int u) const {
    return {in_tails_.data() + in_offsets_[u],
            in_tails_.data() + in_offsets_[u + 1]};
  }
  int out_degree(int u) const { return out_offsets_[u + 1] - out_offsets_[u]; }
  int in_degree(int u) const { return in_offsets_[u + 1] - in_offsets_[u]; }

 private:
  friend DirectedWeightedGraph build_digraph(int, std::vector<Edge>);

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> out_offsets_;
  std::vector<std::int32_t> out_heads_;
  std::vector<int> in_offsets_;
  std::vector<std::int32_t> in_tails_;
};

/// Fund-asset graph: edges connect fund nodes to asset nodes only, weights
/// are gross position values in currency units.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  int fund_count() const { return n_funds_; }
  int asset_count() const { return n_assets_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  std::span<const BipartiteEdge> edges() const { return edges_; }

  int fund_degree(int f) const {
    return fund_offsets_[f + 1] - fund_offsets_[f];
  }
  int asset_degree(int a) const { return asset_degrees_[a]; }

 private:
  friend BipartiteGraph build_bipartite(int, int, std::vector<BipartiteEdge>);

  int n_funds_ = 0;
  int n_assets_ = 0;
  std::vector<BipartiteEdge> edges_;  // sorted by (fund, asset)
  std::vector<int> fund_offsets_;
  std::vector<int> asset_degrees_;
};

/// Validates and freezes an edge list: rejects self-loops, duplicate
/// ordered pairs and negative weights, each error naming the offender.
DirectedWeightedGraph build_digraph(int node_count, std::vector<Edge> edges);

BipartiteGraph build_bipartite(int fund_count, int asset_count,
                               std::vector<BipartiteEdge> edges);

struct Degrees {
  Eigen::VectorXi in;
  Eigen::VectorXi out;
};

Degrees degrees(const DirectedWeightedGraph& g);

/// Edge density: m / (n(n-1)) for digraphs, m / (n*m_assets) for bipartite
/// graphs. Throws DegenerateGraph when the denominator would be empty.
Scalar density(const DirectedWeightedGraph& g);
Scalar density(const BipartiteGraph& g);

enum class Weighting { Weighted, Unweighted };

/// Sparse adjacency view with dimension labels so fund/asset and block
/// matrices can be told apart in exports.
struct AdjacencyMatrix {
  SpMat entries;
  std::string row_label;
  std::string col_label;
};

AdjacencyMatrix adjacency(const DirectedWeightedGraph& g,
                          Weighting w = Weighting::Weighted);

/// The W block alone (funds x assets).
AdjacencyMatrix adjacency(const BipartiteGraph& g,
                          Weighting w = Weighting::Weighted);

/// Full (n+m) x (n+m) block form [[0, W], [W^T, 0]]; symmetric, zero
/// diagonal blocks.
AdjacencyMatrix block_adjacency(const BipartiteGraph& g);

/// Rebuilds the edge list from a square adjacency matrix (round-trip of
/// adjacency()).
DirectedWeightedGraph digraph_from_adjacency(const AdjacencyMatrix& m);

/// Coordinate-triplet debug export: one "row col value" line per stored
/// nonzero, row-major order.
void write_triplets(const SpMat& m, std::ostream& out);

/// Component id per node, ignoring edge direction. Ids are dense and
/// assigned in order of first appearance.
std::vector<int> weak_components(const DirectedWeightedGraph& g);

}  // namespace fundnet
