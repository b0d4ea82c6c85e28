#pragma once

// Independent reference computations the production code is checked
// against: exhaustive path enumeration, Floyd-Warshall distances, Neumann
// series for the dependency matrix, and dense set-functional cascade
// equilibria. None of this shares code with the implementation paths it
// verifies.

#include <algorithm>
#include <climits>
#include <functional>
#include <vector>

#include "fundnet/cascade.hpp"
#include "fundnet/graph.hpp"
#include "fundnet/market.hpp"
#include "fundnet/valuation.hpp"

namespace oracles {

using fundnet::DirectedWeightedGraph;
using fundnet::Mat;
using fundnet::MarketSnapshot;
using fundnet::ScenarioConfig;
using fundnet::Vec;

struct PairPaths {
  int dist = -1;          // -1 when t is unreachable from s
  long long count = 0;    // number of shortest s->t paths
  std::vector<long long> through;  // per node: shortest paths via that node
};

/// Enumerates every simple path s->t by depth-first search and keeps the
/// shortest ones. Exponential; intended for n <= 8.
inline PairPaths enumerate_shortest_paths(const DirectedWeightedGraph& g,
                                          int s, int t) {
  PairPaths out;
  out.through.assign(g.node_count(), 0);
  if (s == t) return out;
  std::vector<int> path{s};
  std::vector<char> on_path(g.node_count(), 0);
  on_path[s] = 1;
  int best = INT_MAX;

  std::function<void(int)> dfs = [&](int u) {
    const int len = static_cast<int>(path.size()) - 1;
    if (len >= best) return;  // any extension is at least as long
    for (std::int32_t v : g.out_neighbors(u)) {
      if (on_path[v]) continue;
      if (v == t) {
        const int total = len + 1;
        if (total < best) {
          best = total;
          out.count = 0;
          std::fill(out.through.begin(), out.through.end(), 0);
        }
        if (total == best) {
          ++out.count;
          for (size_t k = 1; k < path.size(); ++k) ++out.through[path[k]];
        }
        continue;
      }
      on_path[v] = 1;
      path.push_back(v);
      dfs(v);
      path.pop_back();
      on_path[v] = 0;
    }
  };
  dfs(s);
  if (out.count > 0) out.dist = best;
  return out;
}

/// Betweenness by full path enumeration, directed pair counting.
inline Vec brute_betweenness(const DirectedWeightedGraph& g) {
  const int n = g.node_count();
  Vec result = Vec::Zero(n);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s == t) continue;
      const PairPaths pp = enumerate_shortest_paths(g, s, t);
      if (pp.count == 0) continue;
      for (int u = 0; u < n; ++u) {
        if (u == s || u == t || pp.through[u] == 0) continue;
        result[u] += static_cast<double>(pp.through[u]) /
                     static_cast<double>(pp.count);
      }
    }
  }
  return result;
}

/// All-pairs unweighted distances by Floyd-Warshall; -1 for unreachable.
inline std::vector<std::vector<int>> floyd_warshall(
    const DirectedWeightedGraph& g) {
  const int n = g.node_count();
  const int inf = INT_MAX / 4;
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, inf));
  for (int u = 0; u < n; ++u) dist[u][u] = 0;
  for (const fundnet::Edge& e : g.edges()) dist[e.tail][e.head] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (dist[i][j] >= inf) dist[i][j] = -1;
  return dist;
}

/// Incoming closeness with the reachable-set correction, from
/// Floyd-Warshall distances.
inline double brute_closeness(const DirectedWeightedGraph& g, int u) {
  const int n = g.node_count();
  const auto dist = floyd_warshall(g);
  long long sum = 0, reachers = 0;
  for (int v = 0; v < n; ++v) {
    if (v != u && dist[v][u] >= 0) {
      sum += dist[v][u];
      ++reachers;
    }
  }
  if (reachers == 0 || n < 2) return 0.0;
  const double r = static_cast<double>(reachers);
  return (r / (n - 1)) * (r / static_cast<double>(sum));
}

/// Dependency matrix by truncated Neumann series C_hat * sum_k C^k,
/// stopping once the max-abs of the current power drops below tail_tol.
inline Mat neumann_dependency(const fundnet::CrossHoldings& ch,
                              double tail_tol = 1e-14) {
  const int n = ch.fund_count();
  const Mat c = Mat(ch.fractions());
  Mat term = Mat::Identity(n, n);
  Mat sum = Mat::Identity(n, n);
  for (int k = 0; k < 100000; ++k) {
    term = term * c;
    sum += term;
    if (term.cwiseAbs().maxCoeff() < tail_tol) break;
  }
  return ch.outside_share().asDiagonal() * sum;
}

/// Dense mirror of a snapshot for cascade oracles: explicit inverse, dense
/// W and share matrices, plain loops.
struct DenseMarket {
  Mat dependency;     // C_hat (I - C)^{-1}
  Mat positions;      // W at pre-shock prices
  Mat shares;         // D
  Vec baseline;       // dependency * W 1
  std::vector<char> open;
  int funds = 0;
  int assets = 0;
};

inline DenseMarket dense_market(const MarketSnapshot& s) {
  DenseMarket d;
  d.funds = s.fund_count();
  d.assets = s.asset_count();
  const Mat i_minus_c =
      Mat::Identity(d.funds, d.funds) - Mat(s.cross.fractions());
  d.dependency =
      Mat(s.cross.outside_share().asDiagonal()) * i_minus_c.inverse();
  d.positions = Mat(s.holdings.values());
  d.shares = Mat(s.holdings.shares());
  d.baseline = d.dependency * d.positions.rowwise().sum();
  d.open = s.open_mask();
  return d;
}

/// Asset price multipliers for a cumulative failed set: the shock factor
/// for shocked assets times one fire-sale factor (1 - omega * share) per
/// failed holder. A pure function of the set.
inline Vec oracle_price_multipliers(const DenseMarket& d,
                                    const ScenarioConfig& config,
                                    const std::vector<char>& failed) {
  Vec mult = Vec::Ones(d.assets);
  for (std::int32_t a : config.shocked_assets) mult[a] *= config.eta;
  if (config.omega > 0.0) {
    for (int j = 0; j < d.assets; ++j)
      for (int f = 0; f < d.funds; ++f)
        if (failed[f] && d.shares(f, j) > 0.0)
          mult[j] *= 1.0 - config.omega * d.shares(f, j);
  }
  return mult;
}

/// One application of the set-functional failure map: revalue the market
/// under the failed set's prices and failure costs, add everyone below
/// threshold. Monotone in the input set.
inline std::vector<char> oracle_update(const DenseMarket& d,
                                       const ScenarioConfig& config,
                                       const std::vector<char>& failed) {
  const Vec mult = oracle_price_multipliers(d, config, failed);
  Vec primitive = Vec::Zero(d.funds);
  for (int i = 0; i < d.funds; ++i)
    for (int j = 0; j < d.assets; ++j)
      primitive[i] += d.positions(i, j) * mult[j];
  for (int i = 0; i < d.funds; ++i)
    if (failed[i]) primitive[i] -= config.beta_rate * d.baseline[i];
  const Vec values = d.dependency * primitive;
  std::vector<char> next = failed;
  for (int i = 0; i < d.funds; ++i)
    if (d.open[i] && values[i] < config.crit_rate * d.baseline[i])
      next[i] = 1;
  return next;
}

inline std::vector<char> oracle_initial_failures(const DenseMarket& d,
                                                 const ScenarioConfig& config) {
  return oracle_update(d, config, std::vector<char>(d.funds, 0));
}

/// Kleene iteration of the set map from the initial failures; the least
/// fixed point containing them.
inline std::vector<char> oracle_iterated_equilibrium(
    const DenseMarket& d, const ScenarioConfig& config) {
  std::vector<char> failed = oracle_initial_failures(d, config);
  for (;;) {
    std::vector<char> next = oracle_update(d, config, failed);
    if (next == failed) return failed;
    failed = std::move(next);
  }
}

/// Exhaustive minimal-consistent-set search: enumerate every superset of
/// the initial failures over open funds, keep the fixed points of the
/// update map, and return the unique minimal one (checked to be contained
/// in every other fixed point). Exponential; intended for n <= 12.
inline std::vector<char> oracle_exhaustive_equilibrium(
    const DenseMarket& d, const ScenarioConfig& config) {
  const std::vector<char> initial = oracle_initial_failures(d, config);
  std::vector<int> open_ids;
  for (int i = 0; i < d.funds; ++i)
    if (d.open[i] && !initial[i]) open_ids.push_back(i);

  std::vector<std::vector<char>> fixed_points;
  const unsigned k = static_cast<unsigned>(open_ids.size());
  for (unsigned long long mask = 0; mask < (1ull << k); ++mask) {
    std::vector<char> candidate = initial;
    for (unsigned b = 0; b < k; ++b)
      if (mask & (1ull << b)) candidate[open_ids[b]] = 1;
    if (oracle_update(d, config, candidate) == candidate)
      fixed_points.push_back(std::move(candidate));
  }

  // the least fixed point is contained in every other one
  const auto popcount = [](const std::vector<char>& v) {
    return std::count(v.begin(), v.end(), char(1));
  };
  std::vector<char>* minimal = nullptr;
  for (auto& fp : fixed_points)
    if (!minimal || popcount(fp) < popcount(*minimal)) minimal = &fp;
  if (!minimal) return initial;  // cannot happen: the full set is fixed
  for (const auto& fp : fixed_points)
    for (int i = 0; i < d.funds; ++i)
      if ((*minimal)[i] && !fp[i])
        throw std::logic_error("fixed points are not lattice-ordered");
  return *minimal;
}

inline std::vector<std::int32_t> mask_to_set(const std::vector<char>& mask) {
  std::vector<std::int32_t> out;
  for (size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(static_cast<std::int32_t>(i));
  return out;
}

}  // namespace oracles
