#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fundnet/market.hpp"

namespace fundnet {

/// Synthetic market calibrated to the observed topology: preferential
/// attachment gives scale-free in-degree in both networks, one dominant
/// asset ("GOV") is held by most funds and carries a configurable share of
/// total value, and "CASH" is connected to nearly everyone. Deterministic
/// under the seed.
struct GeneratorConfig {
  int n_funds = 100;
  int n_assets = 50;
  double mean_cross_degree = 4.34;   // cross-holding edges per fund
  double mean_asset_degree = 20.23;  // holdings rows per fund
  double pa_strength = 0.8;          // probability of a preferential pick
  double admin_affinity = 0.4;       // investee drawn from same administrator
  double dominant_share = 0.35;      // dominant asset's share of total value
  double dominant_participation = 1.0;
  double dominant_weight_low = 0.12;   // per-fund weight range drawn for the
  double dominant_weight_high = 0.55;  // dominant asset, before rescaling
  double cash_participation = 0.95;
  double fraction_low = 0.01;  // cross-holding stake range
  double fraction_high = 0.04;
  double open_fraction = 1.0;
  std::vector<std::pair<std::string, double>> class_weights = {
      {"fixed_income", 0.35},
      {"multimarket", 0.30},
      {"equity", 0.20},
      {"foreign_exchange", 0.05},
      {"pension", 0.10}};
  int n_administrators = 0;  // 0 -> max(1, n_funds / 25)
  std::string date = "2014-12";
  std::uint64_t seed = 1;
};

MarketSnapshot generate_market(const GeneratorConfig& config);

/// Time series over one fund/asset universe. Between consecutive periods a
/// churn fraction of cross-holding edges is rewired: removed and replaced
/// by fresh random pairs (new fractions, columns re-capped). Holdings stay
/// fixed; node identity is preserved for stability analysis.
std::vector<MarketSnapshot> snapshot_series(const GeneratorConfig& config,
                                            int periods, double churn);

}  // namespace fundnet
