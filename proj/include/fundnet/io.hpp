#pragma once

#include <filesystem>
#include <string>

#include "fundnet/market.hpp"

namespace fundnet {

struct LoadStats {
  int dropped_assets = 0;  // assets removed because nothing holds them
};

/// Reads and validates the four-file snapshot bundle. Duplicate rows and
/// unresolved references are rejected; assets no fund holds are dropped
/// (counted in stats).
///
/// Schemas (UTF-8, header row required, decimal point, no quoting):
///   funds.csv          fund_id,class,administrator,open_ended   (0/1 flag)
///   assets.csv         asset_id,class,price
///   crossholdings.csv  investor_fund_id,investee_fund_id,fraction
///   holdings.csv       fund_id,asset_id,value
MarketSnapshot load_snapshot(const std::filesystem::path& funds_file,
                             const std::filesystem::path& assets_file,
                             const std::filesystem::path& crossholdings_file,
                             const std::filesystem::path& holdings_file,
                             std::string date_label,
                             LoadStats* stats = nullptr);

/// Bundle directory layout: <dir>/funds.csv etc.; the directory name is the
/// snapshot's date label.
MarketSnapshot load_bundle(const std::filesystem::path& dir,
                           LoadStats* stats = nullptr);

/// Writes the four CSVs in canonical order (table order; matrix entries
/// sorted row-major). Serializing a loaded bundle reproduces it byte for
/// byte.
void save_bundle(const MarketSnapshot& snapshot,
                 const std::filesystem::path& dir);

std::string snapshot_to_json(const MarketSnapshot& snapshot, int indent = -1);
MarketSnapshot snapshot_from_json(const std::string& text);

}  // namespace fundnet
