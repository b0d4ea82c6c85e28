#include "fundnet/cascade.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "fundnet/csv.hpp"
#include "fundnet/errors.hpp"

namespace fundnet {

namespace {

void check_range(Scalar value, Scalar lo, Scalar hi, bool lo_open, bool hi_open,
                 const std::string& name) {
  const bool below = lo_open ? value <= lo : value < lo;
  const bool above = hi_open ? value >= hi : value > hi;
  if (below || above || !std::isfinite(value))
    throw ValidationError(name + " = " + std::to_string(value) +
                          " is outside its legal range");
}

IterationRecord record_state(const CascadeState& state) {
  IterationRecord rec;
  rec.t = state.t;
  rec.failed = state.failed;
  rec.newly_failed = state.newly_failed;
  rec.prices = state.holdings.prices();
  rec.values = state.values;
  return rec;
}

}  // namespace

CascadeContext make_cascade_context(const MarketSnapshot& snapshot,
                                    const DependencyMatrix& dep,
                                    const ScenarioConfig& config) {
  if (snapshot.fund_count() == 0)
    throw ValidationError("cannot run a cascade on an empty market");
  if (dep.size() != snapshot.fund_count())
    throw DimensionMismatch("dependency matrix size does not match snapshot");

  check_range(config.eta, 0.0, 1.0, false, true, "eta");
  check_range(config.crit_rate, 0.0, 1.0, true, true, "crit_rate");
  check_range(config.beta_rate, 0.0, 1.0, false, false, "beta_rate");
  check_range(config.omega, 0.0, 1.0, false, false, "omega");
  if (config.max_iterations < 0)
    throw ValidationError("max_iterations must be non-negative");
  if (config.shocked_assets.empty())
    throw ValidationError("scenario shocks no assets");

  CascadeContext ctx;
  ctx.config = config;
  std::sort(ctx.config.shocked_assets.begin(), ctx.config.shocked_assets.end());
  ctx.config.shocked_assets.erase(std::unique(ctx.config.shocked_assets.begin(),
                                              ctx.config.shocked_assets.end()),
                                  ctx.config.shocked_assets.end());
  for (std::int32_t a : ctx.config.shocked_assets) {
    if (a < 0 || a >= snapshot.asset_count())
      throw UnknownAsset("shocked asset index " + std::to_string(a) +
                         " does not exist");
  }

  ctx.dep = &dep;
  ctx.initial_holdings = &snapshot.holdings;
  ctx.open = snapshot.open_mask();
  ctx.baseline_outside = market_values(dep, snapshot.holdings).outside;
  for (int i = 0; i < snapshot.fund_count(); ++i) {
    if (ctx.open[i] && !(ctx.baseline_outside[i] > 0.0))
      throw ValidationError(
          "fund " + snapshot.funds[i].id +
          " has no positive outside value; the snapshot is not a valid "
          "equilibrium starting state");
  }
  ctx.v_crit = config.crit_rate * ctx.baseline_outside;
  ctx.failure_cost = config.beta_rate * ctx.baseline_outside;
  return ctx;
}

CascadeState apply_shock(const CascadeContext& ctx) {
  const BipartiteHoldings& h0 = *ctx.initial_holdings;
  Vec prices = h0.prices();
  for (std::int32_t a : ctx.config.shocked_assets) prices[a] *= ctx.config.eta;

  CascadeState state;
  state.t = 1;
  state.holdings = repriced_holdings(h0, prices);
  state.failed_mask.assign(h0.fund_count(), 0);
  state.failure_costs = Vec::Zero(h0.fund_count());
  state.values = ctx.dep->apply(state.holdings.fund_asset_values());
  for (int i = 0; i < h0.fund_count(); ++i) {
    if (ctx.open[i] && state.values[i] < ctx.v_crit[i]) {
      state.failed.push_back(i);
      state.failed_mask[i] = 1;
      state.failure_costs[i] = ctx.failure_cost[i];
    }
  }
  state.newly_failed = state.failed;
  return state;
}

Scalar fire_sale_factor(Scalar column_total,
                        std::span<const Scalar> failing_positions,
                        Scalar omega) {
  if (!(column_total > 0.0))
    throw AssetUnheld("fire sale on an asset nobody holds");
  // Multiplied in sorted order so the result is exactly independent of the
  // order the failing funds are listed in.
  std::vector<Scalar> sorted(failing_positions.begin(),
                             failing_positions.end());
  std::sort(sorted.begin(), sorted.end());
  Scalar factor = 1.0;
  for (Scalar position : sorted) {
    if (position < 0.0)
      throw ValidationError("negative failing position in fire sale");
    factor *= (column_total - omega * position) / column_total;
  }
  return std::max(0.0, factor);
}

void cascade_step(CascadeState& state, const CascadeContext& ctx) {
  // Fire sales by the funds that crossed the threshold last round. Each
  // (fund, asset) pair presses the price exactly once.
  if (ctx.config.omega > 0.0 && !state.newly_failed.empty()) {
    const BipartiteHoldings& h = state.holdings;
    std::vector<char> newly(h.fund_count(), 0);
    for (std::int32_t f : state.newly_failed) newly[f] = 1;
    Vec new_prices = h.prices();
    std::vector<Scalar> positions;
    for (int j = 0; j < h.asset_count(); ++j) {
      positions.clear();
      for (SpMat::InnerIterator it(h.values(), j); it; ++it) {
        if (newly[it.row()]) {
          state.pressure_applied.emplace(static_cast<std::int32_t>(it.row()),
                                         j);
          if (it.value() > 0.0) positions.push_back(it.value());
        }
      }
      if (!positions.empty())
        new_prices[j] *=
            fire_sale_factor(h.asset_totals()[j], positions, ctx.config.omega);
    }
    state.holdings = repriced_holdings(state.holdings, new_prices);
  }

  // Revalue with failure costs standing for every fund failed so far, then
  // collect the funds newly below threshold. Failure is absorbing.
  state.values =
      ctx.dep->apply(state.holdings.fund_asset_values() - state.failure_costs);
  state.newly_failed.clear();
  const int n = static_cast<int>(state.failed_mask.size());
  for (int i = 0; i < n; ++i) {
    if (!state.failed_mask[i] && ctx.open[i] &&
        state.values[i] < ctx.v_crit[i])
      state.newly_failed.push_back(i);
  }
  for (std::int32_t f : state.newly_failed) {
    state.failed_mask[f] = 1;
    state.failure_costs[f] = ctx.failure_cost[f];
  }
  std::vector<std::int32_t> merged;
  merged.reserve(state.failed.size() + state.newly_failed.size());
  std::merge(state.failed.begin(), state.failed.end(),
             state.newly_failed.begin(), state.newly_failed.end(),
             std::back_inserter(merged));
  state.failed = std::move(merged);
  ++state.t;
}

CascadeResult run_cascade(const MarketSnapshot& snapshot,
                          const DependencyMatrix& dep,
                          const ScenarioConfig& config) {
  const CascadeContext ctx = make_cascade_context(snapshot, dep, config);
  const int n = snapshot.fund_count();
  const int max_iterations =
      config.max_iterations > 0 ? config.max_iterations : n + 2;

  CascadeState state = apply_shock(ctx);
  CascadeResult result;
  result.baseline_outside = ctx.baseline_outside;
  result.initial_failures = static_cast<int>(state.failed.size());
  result.termination_reason = TerminationReason::MaxIterations;
  result.trajectory.push_back(record_state(state));

  for (int round = 1; round <= max_iterations; ++round) {
    cascade_step(state, ctx);
    result.trajectory.push_back(record_state(state));
    result.iterations = round;
    if (state.newly_failed.empty()) {
      result.termination_reason = TerminationReason::Converged;
      break;
    }
  }

  result.final_failures = static_cast<int>(state.failed.size());
  result.total_value_lost = ctx.baseline_outside.sum() - state.values.sum();
  if (result.termination_reason == TerminationReason::Converged &&
      result.iterations > n + 1)
    throw Error("internal: converged cascade exceeded the n + 1 bound");
  return result;
}

CascadeResult run_cascade(const MarketSnapshot& snapshot,
                          const ScenarioConfig& config) {
  return run_cascade(snapshot, dependency_matrix(snapshot.cross), config);
}

std::string cascade_to_json(const CascadeResult& result,
                            const ScenarioConfig& config,
                            const MarketSnapshot& snapshot, int indent) {
  nlohmann::json j;
  nlohmann::json scenario;
  std::vector<std::string> shocked;
  for (std::int32_t a : config.shocked_assets)
    shocked.push_back(snapshot.assets[a].id);
  scenario["shocked_assets"] = shocked;
  scenario["eta"] = config.eta;
  scenario["crit_rate"] = config.crit_rate;
  scenario["beta_rate"] = config.beta_rate;
  scenario["omega"] = config.omega;
  scenario["max_iterations"] = config.max_iterations;
  j["scenario"] = scenario;
  j["date"] = snapshot.date;
  j["initial_failures"] = result.initial_failures;
  j["final_failures"] = result.final_failures;
  j["iterations"] = result.iterations;
  j["termination_reason"] =
      result.termination_reason == TerminationReason::Converged
          ? "converged"
          : "max_iterations";
  j["total_value_lost"] = result.total_value_lost;
  j["baseline_outside_values"] = std::vector<Scalar>(
      result.baseline_outside.begin(), result.baseline_outside.end());

  nlohmann::json trajectory = nlohmann::json::array();
  for (const IterationRecord& rec : result.trajectory) {
    nlohmann::json step;
    step["t"] = rec.t;
    std::vector<std::string> failed, newly;
    for (std::int32_t f : rec.failed) failed.push_back(snapshot.funds[f].id);
    for (std::int32_t f : rec.newly_failed)
      newly.push_back(snapshot.funds[f].id);
    step["failed"] = failed;
    step["newly_failed"] = newly;
    step["prices"] = std::vector<Scalar>(rec.prices.begin(), rec.prices.end());
    step["values"] = std::vector<Scalar>(rec.values.begin(), rec.values.end());
    trajectory.push_back(std::move(step));
  }
  j["trajectory"] = std::move(trajectory);
  return j.dump(indent);
}

std::string cascade_summary_csv_header() {
  return "date,shocked_assets,eta,crit_rate,beta_rate,omega,"
         "initial_failures,final_failures,iterations,total_value_lost,"
         "termination\n";
}

std::string cascade_summary_csv_row(const CascadeResult& result,
                                    const ScenarioConfig& config,
                                    const MarketSnapshot& snapshot) {
  std::string shocked;
  for (size_t i = 0; i < config.shocked_assets.size(); ++i)
    shocked += (i ? ";" : "") + snapshot.assets[config.shocked_assets[i]].id;
  std::string row = snapshot.date + "," + shocked + "," +
                    format_double(config.eta) + "," +
                    format_double(config.crit_rate) + "," +
                    format_double(config.beta_rate) + "," +
                    format_double(config.omega) + "," +
                    std::to_string(result.initial_failures) + "," +
                    std::to_string(result.final_failures) + "," +
                    std::to_string(result.iterations) + "," +
                    format_double(result.total_value_lost) + "," +
                    (result.termination_reason == TerminationReason::Converged
                         ? "converged"
                         : "max_iterations");
  row += '\n';
  return row;
}

}  // namespace fundnet
