#pragma once

#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fundnet/market.hpp"
#include "fundnet/valuation.hpp"

namespace fundnet {

/// Parameters of one cascade scenario. eta is the fraction of value a
/// shocked asset retains (eta < 1, so the shock always destroys value);
/// thresholds and failure costs are proportional to each fund's pre-shock
/// outside value.
struct ScenarioConfig {
  std::vector<std::int32_t> shocked_assets;
  Scalar eta = 0.3;
  Scalar crit_rate = 0.7;
  Scalar beta_rate = 0.1;
  Scalar omega = 0.0;
  int max_iterations = 0;  // 0 -> fund count + 2
};

/// Quantities fixed for a whole run: the dependency matrix, which funds can
/// fail, and the baseline-derived thresholds. Holds references into the
/// snapshot; keep the snapshot alive while using it.
struct CascadeContext {
  const DependencyMatrix* dep = nullptr;
  const BipartiteHoldings* initial_holdings = nullptr;
  ScenarioConfig config;
  std::vector<char> open;
  Vec baseline_outside;  // outside values before the shock
  Vec v_crit;            // crit_rate * baseline
  Vec failure_cost;      // beta_rate * baseline
};

/// Validates the scenario against the snapshot (parameter ranges, asset
/// ids, equilibrium precondition: every open fund has positive baseline
/// outside value) and precomputes thresholds.
CascadeContext make_cascade_context(const MarketSnapshot& snapshot,
                                    const DependencyMatrix& dep,
                                    const ScenarioConfig& config);

struct CascadeState {
  int t = 0;
  std::vector<std::int32_t> failed;        // cumulative, sorted
  std::vector<char> failed_mask;
  std::vector<std::int32_t> newly_failed;  // additions of the last round
  BipartiteHoldings holdings;              // current repriced holdings
  Vec failure_costs;                       // beta on the failed set
  Vec values;                              // assessed outside values
  std::set<std::pair<std::int32_t, std::int32_t>> pressure_applied;
};

/// Scales shocked asset prices by eta, reprices holdings, recomputes
/// values and collects the initial failure set.
CascadeState apply_shock(const CascadeContext& ctx);

/// Price multiplier an asset suffers when the given positions are dumped:
/// the product over failing funds of (total - omega * position) / total,
/// evaluated against the current column total. In [0, 1]; each failing
/// fund's pressure lands exactly once.
Scalar fire_sale_factor(Scalar column_total,
                        std::span<const Scalar> failing_positions,
                        Scalar omega);

/// One update round: fire sales for the funds that failed last round,
/// failure costs for every failed fund, revaluation, new failures. Failure
/// is absorbing.
void cascade_step(CascadeState& state, const CascadeContext& ctx);

enum class TerminationReason { Converged, MaxIterations };

struct IterationRecord {
  int t = 0;
  std::vector<std::int32_t> failed;
  std::vector<std::int32_t> newly_failed;
  Vec prices;
  Vec values;
};

struct CascadeResult {
  int initial_failures = 0;
  int final_failures = 0;
  int iterations = 0;  // update rounds run (the post-shock state is round 0)
  TerminationReason termination_reason = TerminationReason::Converged;
  Scalar total_value_lost = 0.0;
  Vec baseline_outside;
  std::vector<IterationRecord> trajectory;  // [0] is the post-shock state
};

CascadeResult run_cascade(const MarketSnapshot& snapshot,
                          const DependencyMatrix& dep,
                          const ScenarioConfig& config);

/// Convenience overload that builds the dependency matrix itself.
CascadeResult run_cascade(const MarketSnapshot& snapshot,
                          const ScenarioConfig& config);

/// Full trajectory as JSON text (pretty-printed when indent >= 0).
std::string cascade_to_json(const CascadeResult& result,
                            const ScenarioConfig& config,
                            const MarketSnapshot& snapshot, int indent = 2);

/// One-row CSV summary: scenario parameters, initial/final failures,
/// iterations, total value lost. Writes a header first when requested.
std::string cascade_summary_csv_header();
std::string cascade_summary_csv_row(const CascadeResult& result,
                                    const ScenarioConfig& config,
                                    const MarketSnapshot& snapshot);

}  // namespace fundnet
