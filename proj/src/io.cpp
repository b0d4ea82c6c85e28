#include "fundnet/io.hpp"

#include <fstream>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "fundnet/csv.hpp"
#include "fundnet/errors.hpp"

namespace fundnet {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings everywhere
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::int32_t resolve(const std::unordered_map<std::string, std::int32_t>& map,
                     const std::string& id, const std::string& file,
                     int line) {
  const auto it = map.find(id);
  if (it == map.end())
    throw UnresolvedReference(file + " line " + std::to_string(line) +
                              ": unknown id '" + id + "'");
  return it->second;
}

bool parse_flag(const std::string& field, int line, int column) {
  if (field == "0") return false;
  if (field == "1") return true;
  throw ParseError("expected 0 or 1, got '" + field + "'", line, column);
}

}  // namespace

MarketSnapshot load_snapshot(const fs::path& funds_file,
                             const fs::path& assets_file,
                             const fs::path& crossholdings_file,
                             const fs::path& holdings_file,
                             std::string date_label, LoadStats* stats) {
  MarketSnapshot snapshot;
  snapshot.date = std::move(date_label);

  {
    std::ifstream in = open_input(funds_file);
    CsvReader reader(in, funds_file.filename().string(),
                     {"fund_id", "class", "administrator", "open_ended"});
    std::vector<std::string> row;
    while (reader.next(row)) {
      FundInfo fund;
      fund.id = row[0];
      fund.fund_class = row[1];
      fund.administrator = row[2];
      fund.open_ended = parse_flag(row[3], reader.line(), 4);
      if (fund.id.empty())
        throw ParseError("empty fund id", reader.line(), 1);
      snapshot.funds.push_back(std::move(fund));
    }
  }

  std::vector<Scalar> prices;
  {
    std::ifstream in = open_input(assets_file);
    CsvReader reader(in, assets_file.filename().string(),
                     {"asset_id", "class", "price"});
    std::vector<std::string> row;
    while (reader.next(row)) {
      AssetInfo asset;
      asset.id = row[0];
      asset.asset_class = row[1];
      if (asset.id.empty())
        throw ParseError("empty asset id", reader.line(), 1);
      const Scalar price = parse_double_field(row[2], reader.line(), 3);
      if (!(price > 0.0))
        throw NegativePrice("asset " + asset.id + " has non-positive price " +
                            row[2]);
      snapshot.assets.push_back(std::move(asset));
      prices.push_back(price);
    }
  }

  rebuild_indices(snapshot);

  std::vector<CrossHoldingEntry> cross_entries;
  {
    std::ifstream in = open_input(crossholdings_file);
    const std::string name = crossholdings_file.filename().string();
    CsvReader reader(in, name,
                     {"investor_fund_id", "investee_fund_id", "fraction"});
    std::vector<std::string> row;
    std::set<std::pair<std::int32_t, std::int32_t>> seen;
    while (reader.next(row)) {
      CrossHoldingEntry e;
      e.investor = resolve(snapshot.fund_index, row[0], name, reader.line());
      e.investee = resolve(snapshot.fund_index, row[1], name, reader.line());
      e.fraction = parse_double_field(row[2], reader.line(), 3);
      if (!seen.emplace(e.investor, e.investee).second)
        throw DuplicateRow(name + " line " + std::to_string(reader.line()) +
                           ": duplicate pair (" + row[0] + ", " + row[1] +
                           "); pre-aggregate deliberately");
      cross_entries.push_back(e);
    }
  }

  std::vector<BipartiteEdge> positions;
  {
    std::ifstream in = open_input(holdings_file);
    const std::string name = holdings_file.filename().string();
    CsvReader reader(in, name, {"fund_id", "asset_id", "value"});
    std::vector<std::string> row;
    std::set<std::pair<std::int32_t, std::int32_t>> seen;
    while (reader.next(row)) {
      BipartiteEdge e;
      e.fund = resolve(snapshot.fund_index, row[0], name, reader.line());
      e.asset = resolve(snapshot.asset_index, row[1], name, reader.line());
      e.value = parse_double_field(row[2], reader.line(), 3);
      if (!seen.emplace(e.fund, e.asset).second)
        throw DuplicateRow(name + " line " + std::to_string(reader.line()) +
                           ": duplicate pair (" + row[0] + ", " + row[1] +
                           "); pre-aggregate deliberately");
      positions.push_back(e);
    }
  }

  // Drop assets nothing holds: their ownership shares are undefined.
  std::vector<Scalar> held_total(snapshot.assets.size(), 0.0);
  for (const BipartiteEdge& e : positions) held_total[e.asset] += e.value;
  std::vector<std::int32_t> remap(snapshot.assets.size(), -1);
  {
    std::vector<AssetInfo> kept_assets;
    std::vector<Scalar> kept_prices;
    for (size_t a = 0; a < snapshot.assets.size(); ++a) {
      if (held_total[a] > 0.0) {
        remap[a] = static_cast<std::int32_t>(kept_assets.size());
        kept_assets.push_back(snapshot.assets[a]);
        kept_prices.push_back(prices[a]);
      }
    }
    if (stats)
      stats->dropped_assets =
          static_cast<int>(snapshot.assets.size() - kept_assets.size());
    if (kept_assets.size() != snapshot.assets.size()) {
      snapshot.assets = std::move(kept_assets);
      prices = std::move(kept_prices);
      std::vector<BipartiteEdge> kept_positions;
      for (const BipartiteEdge& e : positions)
        if (remap[e.asset] >= 0)
          kept_positions.push_back({e.fund, remap[e.asset], e.value});
      positions = std::move(kept_positions);
      rebuild_indices(snapshot);
    }
  }

  snapshot.cross =
      build_cross_holdings(snapshot.fund_count(), std::move(cross_entries));
  snapshot.holdings = build_bipartite_holdings(
      snapshot.fund_count(), snapshot.asset_count(), std::move(positions),
      Eigen::Map<Vec>(prices.data(), static_cast<Eigen::Index>(prices.size())));
  validate_snapshot(snapshot);
  return snapshot;
}

MarketSnapshot load_bundle(const fs::path& dir, LoadStats* stats) {
  return load_snapshot(dir / "funds.csv", dir / "assets.csv",
                       dir / "crossholdings.csv", dir / "holdings.csv",
                       dir.filename().string(), stats);
}

void save_bundle(const MarketSnapshot& snapshot, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  {
    std::ofstream out = open_output(dir / "funds.csv");
    out << "fund_id,class,administrator,open_ended\n";
    for (const FundInfo& f : snapshot.funds)
      out << f.id << ',' << f.fund_class << ',' << f.administrator << ','
          << (f.open_ended ? '1' : '0') << '\n';
  }
  {
    std::ofstream out = open_output(dir / "assets.csv");
    out << "asset_id,class,price\n";
    for (size_t a = 0; a < snapshot.assets.size(); ++a)
      out << snapshot.assets[a].id << ',' << snapshot.assets[a].asset_class
          << ',' << format_double(snapshot.holdings.prices()[a]) << '\n';
  }
  {
    std::ofstream out = open_output(dir / "crossholdings.csv");
    out << "investor_fund_id,investee_fund_id,fraction\n";
    for (const CrossHoldingEntry& e : snapshot.cross.entries())
      out << snapshot.funds[e.investor].id << ','
          << snapshot.funds[e.investee].id << ',' << format_double(e.fraction)
          << '\n';
  }
  {
    std::ofstream out = open_output(dir / "holdings.csv");
    out << "fund_id,asset_id,value\n";
    for (const BipartiteEdge& e : snapshot.holdings.entries())
      out << snapshot.funds[e.fund].id << ',' << snapshot.assets[e.asset].id
          << ',' << format_double(e.value) << '\n';
  }
}

std::string snapshot_to_json(const MarketSnapshot& snapshot, int indent) {
  nlohmann::json j;
  j["date"] = snapshot.date;
  nlohmann::json funds = nlohmann::json::array();
  for (const FundInfo& f : snapshot.funds)
    funds.push_back({{"id", f.id},
                     {"class", f.fund_class},
                     {"administrator", f.administrator},
                     {"open_ended", f.open_ended}});
  j["funds"] = std::move(funds);
  nlohmann::json assets = nlohmann::json::array();
  for (size_t a = 0; a < snapshot.assets.size(); ++a)
    assets.push_back({{"id", snapshot.assets[a].id},
                      {"class", snapshot.assets[a].asset_class},
                      {"price", snapshot.holdings.prices()[a]}});
  j["assets"] = std::move(assets);
  nlohmann::json cross = nlohmann::json::array();
  for (const CrossHoldingEntry& e : snapshot.cross.entries())
    cross.push_back({snapshot.funds[e.investor].id,
                     snapshot.funds[e.investee].id, e.fraction});
  j["crossholdings"] = std::move(cross);
  nlohmann::json holdings = nlohmann::json::array();
  for (const BipartiteEdge& e : snapshot.holdings.entries())
    holdings.push_back(
        {snapshot.funds[e.fund].id, snapshot.assets[e.asset].id, e.value});
  j["holdings"] = std::move(holdings);
  return j.dump(indent);
}

MarketSnapshot snapshot_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid snapshot JSON: ") + e.what(), 1, 1);
  }
  MarketSnapshot snapshot;
  try {
    snapshot.date = j.at("date").get<std::string>();
    std::vector<Scalar> prices;
    for (const auto& f : j.at("funds")) {
      snapshot.funds.push_back({f.at("id").get<std::string>(),
                                f.at("class").get<std::string>(),
                                f.at("administrator").get<std::string>(),
                                f.at("open_ended").get<bool>()});
    }
    for (const auto& a : j.at("assets")) {
      snapshot.assets.push_back(
          {a.at("id").get<std::string>(), a.at("class").get<std::string>()});
      prices.push_back(a.at("price").get<Scalar>());
    }
    rebuild_indices(snapshot);
    std::vector<CrossHoldingEntry> cross;
    for (const auto& e : j.at("crossholdings")) {
      cross.push_back(
          {resolve(snapshot.fund_index, e.at(0).get<std::string>(),
                   "crossholdings", 0),
           resolve(snapshot.fund_index, e.at(1).get<std::string>(),
                   "crossholdings", 0),
           e.at(2).get<Scalar>()});
    }
    std::vector<BipartiteEdge> positions;
    for (const auto& e : j.at("holdings")) {
      positions.push_back(
          {resolve(snapshot.fund_index, e.at(0).get<std::string>(), "holdings",
                   0),
           resolve(snapshot.asset_index, e.at(1).get<std::string>(),
                   "holdings", 0),
           e.at(2).get<Scalar>()});
    }
    snapshot.cross =
        build_cross_holdings(snapshot.fund_count(), std::move(cross));
    snapshot.holdings = build_bipartite_holdings(
        snapshot.fund_count(), snapshot.asset_count(), std::move(positions),
        Eigen::Map<Vec>(prices.data(),
                        static_cast<Eigen::Index>(prices.size())));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("snapshot JSON shape: ") + e.what(), 1, 1);
  }
  validate_snapshot(snapshot);
  return snapshot;
}

}  // namespace fundnet
