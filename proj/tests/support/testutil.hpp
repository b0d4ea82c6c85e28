#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fundnet/market.hpp"

namespace testutil {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random digraph: every ordered pair independently with probability p.
/// symmetric mirrors each accepted pair, giving an undirected edge set.
inline fundnet::DirectedWeightedGraph random_digraph(Rng& rng, int n, double p,
                                                     bool symmetric = false) {
  std::vector<fundnet::Edge> edges;
  if (symmetric) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (uniform(rng, 0.0, 1.0) < p) {
          const double w = uniform(rng, 0.1, 2.0);
          edges.push_back({i, j, w});
          edges.push_back({j, i, w});
        }
      }
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && uniform(rng, 0.0, 1.0) < p)
          edges.push_back({i, j, uniform(rng, 0.1, 2.0)});
  }
  return fundnet::build_digraph(n, std::move(edges));
}

struct RandomMarketOptions {
  int min_funds = 2;
  int max_funds = 10;
  int min_assets = 1;
  int max_assets = 6;
  double cross_density = 0.3;
  double max_column_sum = 0.8;
  double closed_fraction = 0.0;
};

/// Small random market that satisfies every construction invariant: capped
/// cross-holding columns, every asset held, every fund with a portfolio.
inline fundnet::MarketSnapshot random_market(Rng& rng,
                                             const RandomMarketOptions& opt = {}) {
  using namespace fundnet;
  MarketSnapshot s;
  const int n = uniform_int(rng, opt.min_funds, opt.max_funds);
  const int m = uniform_int(rng, opt.min_assets, opt.max_assets);
  s.date = "test";
  for (int i = 0; i < n; ++i) {
    FundInfo f;
    f.id = "F" + std::to_string(i);
    f.fund_class = (i % 2) ? "alpha" : "beta";
    f.administrator = "M" + std::to_string(i % 3);
    f.open_ended = !(uniform(rng, 0.0, 1.0) < opt.closed_fraction);
    s.funds.push_back(std::move(f));
  }
  for (int a = 0; a < m; ++a)
    s.assets.push_back({"A" + std::to_string(a), (a % 2) ? "bond" : "equity"});

  std::vector<CrossHoldingEntry> cross;
  std::vector<double> col_sums(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && uniform(rng, 0.0, 1.0) < opt.cross_density) {
        const double f = uniform(rng, 0.05, 0.5);
        cross.push_back({i, j, f});
        col_sums[j] += f;
      }
  for (CrossHoldingEntry& e : cross)
    if (col_sums[e.investee] > opt.max_column_sum)
      e.fraction *= opt.max_column_sum / col_sums[e.investee];

  std::vector<BipartiteEdge> positions;
  std::vector<double> held(m, 0.0);
  for (int i = 0; i < n; ++i) {
    const int k = uniform_int(rng, 1, m);
    std::vector<int> assets(m);
    std::iota(assets.begin(), assets.end(), 0);
    std::shuffle(assets.begin(), assets.end(), rng);
    for (int slot = 0; slot < k; ++slot) {
      const double v = uniform(rng, 1.0, 100.0);
      positions.push_back({i, assets[slot], v});
      held[assets[slot]] += v;
    }
  }
  for (int a = 0; a < m; ++a) {
    if (!(held[a] > 0.0)) {
      const int f = uniform_int(rng, 0, n - 1);
      positions.push_back({f, a, uniform(rng, 1.0, 10.0)});
    }
  }
  Vec prices(m);
  for (int a = 0; a < m; ++a) prices[a] = uniform(rng, 0.5, 20.0);

  s.cross = build_cross_holdings(n, std::move(cross));
  s.holdings = build_bipartite_holdings(n, m, std::move(positions), prices);
  rebuild_indices(s);
  validate_snapshot(s);
  return s;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("fundnet_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace testutil
