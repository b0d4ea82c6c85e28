#include "fundnet/graph.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "fundnet/errors.hpp"

namespace fundnet {

namespace {

std::string pair_str(std::int32_t a, std::int32_t b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

}  // namespace

DirectedWeightedGraph build_digraph(int node_count, std::vector<Edge> edges) {
  if (node_count < 0) throw DegenerateGraph("negative node count");
  for (const Edge& e : edges) {
    if (e.tail < 0 || e.tail >= node_count || e.head < 0 ||
        e.head >= node_count)
      throw DegenerateGraph("edge endpoint out of range: " +
                            pair_str(e.tail, e.head));
    if (e.tail == e.head)
      throw SelfLoop("self-loop at node " + std::to_string(e.tail));
    if (e.weight < 0)
      throw NegativeWeight("negative weight on edge " +
                           pair_str(e.tail, e.head));
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.tail, a.head) < std::tie(b.tail, b.head);
  });
  for (size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].tail == edges[i - 1].tail &&
        edges[i].head == edges[i - 1].head)
      throw DuplicateEdge("duplicate edge " +
                          pair_str(edges[i].tail, edges[i].head));
  }

  DirectedWeightedGraph g;
  g.n_ = node_count;
  g.edges_ = std::move(edges);

  g.out_offsets_.assign(node_count + 1, 0);
  g.in_offsets_.assign(node_count + 1, 0);
  for (const Edge& e : g.edges_) {
    ++g.out_offsets_[e.tail + 1];
    ++g.in_offsets_[e.head + 1];
  }
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(),
                   g.out_offsets_.begin());
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(),
                   g.in_offsets_.begin());
  g.out_heads_.resize(g.edges_.size());
  g.in_tails_.resize(g.edges_.size());
  std::vector<int> out_pos(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
  std::vector<int> in_pos(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.out_heads_[out_pos[e.tail]++] = e.head;
    g.in_tails_[in_pos[e.head]++] = e.tail;
  }
  return g;
}

BipartiteGraph build_bipartite(int fund_count, int asset_count,
                               std::vector<BipartiteEdge> edges) {
  if (fund_count < 0 || asset_count < 0)
    throw DegenerateGraph("negative node count");
  for (const BipartiteEdge& e : edges) {
    if (e.fund < 0 || e.fund >= fund_count)
      throw DegenerateGraph("fund index out of range: " +
                            std::to_string(e.fund));
    if (e.asset < 0 || e.asset >= asset_count)
      throw DegenerateGraph("asset index out of range: " +
                            std::to_string(e.asset));
    if (e.value < 0)
      throw NegativeWeight("negative value on holding " +
                           pair_str(e.fund, e.asset));
  }
  std::sort(edges.begin(), edges.end(),
            [](const BipartiteEdge& a, const BipartiteEdge& b) {
              return std::tie(a.fund, a.asset) < std::tie(b.fund, b.asset);
            });
  for (size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].fund == edges[i - 1].fund &&
        edges[i].asset == edges[i - 1].asset)
      throw DuplicateEdge("duplicate holding " +
                          pair_str(edges[i].fund, edges[i].asset));
  }

  BipartiteGraph g;
  g.n_funds_ = fund_count;
  g.n_assets_ = asset_count;
  g.edges_ = std::move(edges);
  g.fund_offsets_.assign(fund_count + 1, 0);
  g.asset_degrees_.assign(asset_count, 0);
  for (const BipartiteEdge& e : g.edges_) {
    ++g.fund_offsets_[e.fund + 1];
    ++g.asset_degrees_[e.asset];
  }
  std::partial_sum(g.fund_offsets_.begin(), g.fund_offsets_.end(),
                   g.fund_offsets_.begin());
  return g;
}

Degrees degrees(const DirectedWeightedGraph& g) {
  Degrees d;
  d.in = Eigen::VectorXi::Zero(g.node_count());
  d.out = Eigen::VectorXi::Zero(g.node_count());
  for (const Edge& e : g.edges()) {
    ++d.out[e.tail];
    ++d.in[e.head];
  }
  return d;
}

Scalar density(const DirectedWeightedGraph& g) {
  const auto n = static_cast<Scalar>(g.node_count());
  if (g.node_count() < 2)
    throw DegenerateGraph("density needs at least 2 nodes");
  return static_cast<Scalar>(g.edge_count()) / (n * (n - 1));
}

Scalar density(const BipartiteGraph& g) {
  if (g.fund_count() < 1 || g.asset_count() < 1)
    throw DegenerateGraph("density needs at least one node per side");
  return static_cast<Scalar>(g.edge_count()) /
         (static_cast<Scalar>(g.fund_count()) *
          static_cast<Scalar>(g.asset_count()));
}

AdjacencyMatrix adjacency(const DirectedWeightedGraph& g, Weighting w) {
  SpMat m(g.node_count(), g.node_count());
  std::vector<Triplet> trips;
  trips.reserve(g.edge_count());
  for (const Edge& e : g.edges())
    trips.emplace_back(e.tail, e.head,
                       w == Weighting::Weighted ? e.weight : 1.0);
  m.setFromTriplets(trips.begin(), trips.end());
  return {std::move(m), "fund", "fund"};
}

AdjacencyMatrix adjacency(const BipartiteGraph& g, Weighting w) {
  SpMat m(g.fund_count(), g.asset_count());
  std::vector<Triplet> trips;
  trips.reserve(g.edge_count());
  for (const BipartiteEdge& e : g.edges())
    trips.emplace_back(e.fund, e.asset,
                       w == Weighting::Weighted ? e.value : 1.0);
  m.setFromTriplets(trips.begin(), trips.end());
  return {std::move(m), "fund", "asset"};
}

AdjacencyMatrix block_adjacency(const BipartiteGraph& g) {
  const int n = g.fund_count();
  const int total = n + g.asset_count();
  SpMat m(total, total);
  std::vector<Triplet> trips;
  trips.reserve(2 * g.edge_count());
  for (const BipartiteEdge& e : g.edges()) {
    trips.emplace_back(e.fund, n + e.asset, e.value);
    trips.emplace_back(n + e.asset, e.fund, e.value);
  }
  m.setFromTriplets(trips.begin(), trips.end());
  return {std::move(m), "fund+asset", "fund+asset"};
}

DirectedWeightedGraph digraph_from_adjacency(const AdjacencyMatrix& m) {
  if (m.entries.rows() != m.entries.cols())
    throw DegenerateGraph("adjacency matrix is not square");
  std::vector<Edge> edges;
  for (int k = 0; k < m.entries.outerSize(); ++k)
    for (SpMat::InnerIterator it(m.entries, k); it; ++it)
      if (it.value() != 0.0)
        edges.push_back({static_cast<std::int32_t>(it.row()),
                         static_cast<std::int32_t>(it.col()), it.value()});
  return build_digraph(static_cast<int>(m.entries.rows()), std::move(edges));
}

void write_triplets(const SpMat& m, std::ostream& out) {
  // collect then sort row-major so the export order is storage-independent
  struct Entry {
    long row, col;
    Scalar value;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<size_t>(m.nonZeros()));
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      entries.push_back({it.row(), it.col(), it.value()});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  for (const Entry& e : entries)
    out << e.row << ' ' << e.col << ' ' << e.value << '\n';
}

std::vector<int> weak_components(const DirectedWeightedGraph& g) {
  const int n = g.node_count();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : g.edges()) {
    int a = find(e.tail), b = find(e.head);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> id(n, -1);
  int next = 0;
  for (int u = 0; u < n; ++u) {
    int root = find(u);
    if (id[root] < 0) id[root] = next++;
    id[u] = id[root];
  }
  return id;
}

}  // namespace fundnet
