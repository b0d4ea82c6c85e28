#include "fundnet/market.hpp"

#include "fundnet/errors.hpp"

namespace fundnet {

DirectedWeightedGraph MarketSnapshot::crossholdings_graph() const {
  std::vector<Edge> edges;
  for (const CrossHoldingEntry& e : cross.entries())
    edges.push_back({e.investor, e.investee, e.fraction});
  return build_digraph(fund_count(), std::move(edges));
}

BipartiteGraph MarketSnapshot::holdings_graph() const {
  return build_bipartite(fund_count(), asset_count(), holdings.entries());
}

std::vector<char> MarketSnapshot::open_mask() const {
  std::vector<char> open(funds.size());
  for (size_t i = 0; i < funds.size(); ++i) open[i] = funds[i].open_ended;
  return open;
}

void rebuild_indices(MarketSnapshot& snapshot) {
  snapshot.fund_index.clear();
  snapshot.asset_index.clear();
  for (size_t i = 0; i < snapshot.funds.size(); ++i) {
    const auto [it, inserted] = snapshot.fund_index.emplace(
        snapshot.funds[i].id, static_cast<std::int32_t>(i));
    if (!inserted) throw DuplicateRow("duplicate fund id " + snapshot.funds[i].id);
  }
  for (size_t i = 0; i < snapshot.assets.size(); ++i) {
    const auto [it, inserted] = snapshot.asset_index.emplace(
        snapshot.assets[i].id, static_cast<std::int32_t>(i));
    if (!inserted)
      throw DuplicateRow("duplicate asset id " + snapshot.assets[i].id);
  }
}

void validate_snapshot(const MarketSnapshot& snapshot) {
  if (snapshot.cross.fund_count() != snapshot.fund_count())
    throw ValidationError("cross-holdings cover " +
                          std::to_string(snapshot.cross.fund_count()) +
                          " funds, table has " +
                          std::to_string(snapshot.fund_count()));
  if (snapshot.holdings.fund_count() != snapshot.fund_count() ||
      snapshot.holdings.asset_count() != snapshot.asset_count())
    throw ValidationError("holdings dimensions do not match tables");
  if (snapshot.fund_index.size() != snapshot.funds.size() ||
      snapshot.asset_index.size() != snapshot.assets.size())
    throw ValidationError("index maps are not a bijection over the tables");
  for (const auto& [id, idx] : snapshot.fund_index) {
    if (idx < 0 || idx >= snapshot.fund_count() ||
        snapshot.funds[idx].id != id)
      throw ValidationError("fund index map out of sync at " + id);
  }
  for (const auto& [id, idx] : snapshot.asset_index) {
    if (idx < 0 || idx >= snapshot.asset_count() ||
        snapshot.assets[idx].id != id)
      throw ValidationError("asset index map out of sync at " + id);
  }
}

}  // namespace fundnet
