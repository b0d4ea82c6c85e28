#pragma once

#include <string>
#include <vector>

#include "fundnet/cascade.hpp"

namespace fundnet {

/// Parameter grid around a base scenario. The grid is the cross product of
/// the four value lists, visited lexicographically in list order.
struct SweepSpec {
  ScenarioConfig base;  // shock set and max_iterations come from here
  std::vector<Scalar> eta_values;
  std::vector<Scalar> crit_values;
  std::vector<Scalar> beta_values;
  std::vector<Scalar> omega_values;
  int jobs = 1;
};

struct SweepRow {
  Scalar eta = 0.0;
  Scalar crit_rate = 0.0;
  Scalar beta_rate = 0.0;
  Scalar omega = 0.0;
  int initial_failures = 0;
  int final_failures = 0;
  int iterations = 0;
  Scalar total_value_lost = 0.0;
  std::string error;  // non-empty marks a failed row; numeric fields unset
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // one per grid point, canonical order
};

/// Runs every grid point against one immutable snapshot and one shared
/// dependency matrix. Per-row errors (illegal parameter combinations) are
/// recorded in the row, never aborting the grid. Output is byte-identical
/// for any jobs count.
SweepResult run_sweep(const MarketSnapshot& snapshot,
                      const DependencyMatrix& dep, const SweepSpec& spec);

std::string sweep_csv(const SweepResult& result);

/// Matrix CSV: x parameter values as columns, y values as rows, the z
/// column aggregated one row per cell. The two remaining parameters must be
/// held fixed (single value), otherwise AmbiguousCell.
std::string heatmap_csv(const SweepResult& result, const std::string& x_param,
                        const std::string& y_param,
                        const std::string& z_column);

}  // namespace fundnet
