#include "fundnet/centrality.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "fundnet/errors.hpp"

namespace fundnet {

namespace {

// BFS from u along reversed edges; dist[v] = d(v, u) in the original
// orientation, -1 where v does not reach u.
std::vector<int> distances_to(const DirectedWeightedGraph& g, int u) {
  std::vector<int> dist(g.node_count(), -1);
  std::vector<int> queue;
  queue.reserve(g.node_count());
  dist[u] = 0;
  queue.push_back(u);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    const int v = queue[qi];
    for (std::int32_t t : g.in_neighbors(v)) {
      if (dist[t] < 0) {
        dist[t] = dist[v] + 1;
        queue.push_back(t);
      }
    }
  }
  return dist;
}

// One Brandes pass: adds source s's dependency contribution into acc.
void brandes_source(const DirectedWeightedGraph& g, int s, Vec& acc) {
  const int n = g.node_count();
  std::vector<int> dist(n, -1);
  std::vector<Scalar> sigma(n, 0.0);
  std::vector<int> order;
  order.reserve(n);
  dist[s] = 0;
  sigma[s] = 1.0;
  order.push_back(s);
  for (size_t qi = 0; qi < order.size(); ++qi) {
    const int v = order[qi];
    for (std::int32_t w : g.out_neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        order.push_back(w);
      }
      if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
    }
  }
  std::vector<Scalar> delta(n, 0.0);
  for (size_t qi = order.size(); qi-- > 0;) {
    const int v = order[qi];
    for (std::int32_t p : g.in_neighbors(v)) {
      if (dist[p] >= 0 && dist[p] + 1 == dist[v])
        delta[p] += sigma[p] / sigma[v] * (1.0 + delta[v]);
    }
    if (v != s) acc[v] += delta[v];
  }
}

}  // namespace

Scalar closeness_centrality(const DirectedWeightedGraph& g, int u) {
  const int n = g.node_count();
  if (u < 0 || u >= n) throw DegenerateGraph("node index out of range");
  const std::vector<int> dist = distances_to(g, u);
  long long sum = 0;
  long long reachers = 0;
  for (int v = 0; v < n; ++v) {
    if (v != u && dist[v] >= 0) {
      sum += dist[v];
      ++reachers;
    }
  }
  if (reachers == 0 || n < 2) return 0.0;
  const Scalar r_minus_1 = static_cast<Scalar>(reachers);
  return (r_minus_1 / static_cast<Scalar>(n - 1)) *
         (r_minus_1 / static_cast<Scalar>(sum));
}

Vec closeness_all(const DirectedWeightedGraph& g) {
  Vec c(g.node_count());
  for (int u = 0; u < g.node_count(); ++u) c[u] = closeness_centrality(g, u);
  return c;
}

Vec betweenness_centrality(const DirectedWeightedGraph& g,
                           PairCounting counting, int jobs) {
  const int n = g.node_count();
  Vec result = Vec::Zero(n);
  jobs = std::max(1, jobs);

  if (jobs == 1) {
    for (int s = 0; s < n; ++s) brandes_source(g, s, result);
  } else {
    // Sources are processed chunk by chunk; per-source vectors are reduced
    // in source order so the sum does not depend on the thread count.
    const int chunk = 128;
    std::vector<Vec> buffers(chunk);
    for (int base = 0; base < n; base += chunk) {
      const int count = std::min(chunk, n - base);
      std::atomic<int> next{0};
      auto worker = [&] {
        for (;;) {
          const int k = next.fetch_add(1);
          if (k >= count) break;
          buffers[k] = Vec::Zero(n);
          brandes_source(g, base + k, buffers[k]);
        }
      };
      std::vector<std::thread> threads;
      for (int t = 0; t < std::min(jobs, count); ++t)
        threads.emplace_back(worker);
      for (auto& t : threads) t.join();
      for (int k = 0; k < count; ++k) result += buffers[k];
    }
  }

  if (counting == PairCounting::Undirected) result *= 0.5;
  return result;
}

Mat shortest_path_counts(const DirectedWeightedGraph& g) {
  const int n = g.node_count();
  Mat sigma = Mat::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(n, -1);
    std::vector<int> order;
    dist[s] = 0;
    sigma(s, s) = 1.0;
    order.push_back(s);
    for (size_t qi = 0; qi < order.size(); ++qi) {
      const int v = order[qi];
      for (std::int32_t w : g.out_neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma(s, w) += sigma(s, v);
      }
    }
  }
  return sigma;
}

EigenvectorResult eigenvector_centrality(const DirectedWeightedGraph& g,
                                         Weighting weighting,
                                         int max_iterations, Scalar tol) {
  const int n = g.node_count();
  if (g.edge_count() == 0)
    throw DegenerateGraph("eigenvector centrality needs at least one edge");

  // Incoming orientation: node u inherits importance from nodes linking to
  // it, so we iterate on the transposed adjacency.
  SpMat mt(n, n);
  {
    std::vector<Triplet> trips;
    trips.reserve(g.edge_count());
    for (const Edge& e : g.edges())
      trips.emplace_back(e.head, e.tail,
                         weighting == Weighting::Weighted ? e.weight : 1.0);
    mt.setFromTriplets(trips.begin(), trips.end());
  }

  // Iterating on M + I instead of M keeps the same eigenvectors but makes
  // every strongly connected block aperiodic, so bipartite structures (the
  // star graph, the fund-asset network) converge instead of oscillating.
  Vec x = Vec::Constant(n, 1.0 / std::sqrt(static_cast<Scalar>(n)));
  for (int it = 1; it <= max_iterations; ++it) {
    Vec y = mt * x + x;
    const Scalar norm = y.norm();
    if (!(norm > 1e-300))
      throw NoConvergence(
          "power iteration collapsed to zero (nilpotent adjacency)");
    y /= norm;
    const Scalar diff = (y - x).lpNorm<Eigen::Infinity>();
    x = std::move(y);
    if (diff < tol) {
      EigenvectorResult r;
      r.eigenvalue = x.dot(mt * x);
      r.centrality = std::move(x);
      r.iterations = it;
      return r;
    }
  }
  throw NoConvergence("power iteration did not converge after " +
                      std::to_string(max_iterations) +
                      " iterations (periodic or degenerate structure)");
}

CentralityReport centrality_report(const DirectedWeightedGraph& g,
                                   PairCounting counting, int jobs) {
  CentralityReport r;
  const Degrees d = degrees(g);
  r.degree_in = d.in;
  r.degree_out = d.out;
  r.closeness = closeness_all(g);
  r.betweenness = betweenness_centrality(g, counting, jobs);
  const std::vector<int> comp = weak_components(g);
  r.weakly_connected =
      std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
  try {
    EigenvectorResult e = eigenvector_centrality(g);
    r.eigenvector = std::move(e.centrality);
    r.eigenvalue = e.eigenvalue;
    r.eigenvector_iterations = e.iterations;
  } catch (const Error&) {
    r.eigenvector.reset();
  }
  return r;
}

}  // namespace fundnet
