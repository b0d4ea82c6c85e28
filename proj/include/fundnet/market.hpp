#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "fundnet/graph.hpp"
#include "fundnet/valuation.hpp"

namespace fundnet {

struct FundInfo {
  std::string id;
  std::string fund_class;
  std::string administrator;
  bool open_ended = true;

  friend bool operator==(const FundInfo&, const FundInfo&) = default;
};

struct AssetInfo {
  std::string id;
  std::string asset_class;

  friend bool operator==(const AssetInfo&, const AssetInfo&) = default;
};

/// Complete system state at one date: fund and asset tables with their
/// external identifiers, the cross-holdings matrix and the fund-asset
/// holdings. Immutable once built; the index maps are derived from the
/// tables and give the dense index for each external id.
struct MarketSnapshot {
  std::string date;
  std::vector<FundInfo> funds;
  std::vector<AssetInfo> assets;
  CrossHoldings cross;
  BipartiteHoldings holdings;
  std::unordered_map<std::string, std::int32_t> fund_index;
  std::unordered_map<std::string, std::int32_t> asset_index;

  int fund_count() const { return static_cast<int>(funds.size()); }
  int asset_count() const { return static_cast<int>(assets.size()); }

  /// Cross-holdings digraph: investor is the tail, investee the head,
  /// weight the held fraction.
  DirectedWeightedGraph crossholdings_graph() const;
  BipartiteGraph holdings_graph() const;
  std::vector<char> open_mask() const;
};

/// Rebuilds fund_index/asset_index from the tables; throws DuplicateRow on
/// repeated external ids.
void rebuild_indices(MarketSnapshot& snapshot);

/// Cross-checks table sizes against matrix dimensions and the index maps;
/// throws ValidationError naming the violated invariant.
void validate_snapshot(const MarketSnapshot& snapshot);

}  // namespace fundnet
