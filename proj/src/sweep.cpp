#include "fundnet/sweep.hpp"

#include <atomic>
#include <thread>

#include "fundnet/csv.hpp"
#include "fundnet/errors.hpp"

namespace fundnet {

namespace {

const std::vector<Scalar>& parameter_values(const SweepSpec& spec,
                                            const std::string& name) {
  if (name == "eta") return spec.eta_values;
  if (name == "crit_rate") return spec.crit_values;
  if (name == "beta_rate") return spec.beta_values;
  if (name == "omega") return spec.omega_values;
  throw UnknownParameter("unknown sweep parameter '" + name + "'");
}

Scalar row_parameter(const SweepRow& row, const std::string& name) {
  if (name == "eta") return row.eta;
  if (name == "crit_rate") return row.crit_rate;
  if (name == "beta_rate") return row.beta_rate;
  if (name == "omega") return row.omega;
  throw UnknownParameter("unknown sweep parameter '" + name + "'");
}

std::string row_column(const SweepRow& row, const std::string& name) {
  if (name == "initial_failures") return std::to_string(row.initial_failures);
  if (name == "final_failures") return std::to_string(row.final_failures);
  if (name == "iterations") return std::to_string(row.iterations);
  if (name == "total_value_lost") return format_double(row.total_value_lost);
  throw UnknownParameter("unknown result column '" + name + "'");
}

}  // namespace

SweepResult run_sweep(const MarketSnapshot& snapshot,
                      const DependencyMatrix& dep, const SweepSpec& spec) {
  if (spec.eta_values.empty() || spec.crit_values.empty() ||
      spec.beta_values.empty() || spec.omega_values.empty())
    throw ValidationError("every sweep parameter needs at least one value");

  SweepResult result;
  result.spec = spec;
  const size_t n_eta = spec.eta_values.size();
  const size_t n_crit = spec.crit_values.size();
  const size_t n_beta = spec.beta_values.size();
  const size_t n_omega = spec.omega_values.size();
  const size_t grid = n_eta * n_crit * n_beta * n_omega;
  result.rows.resize(grid);

  auto run_point = [&](size_t index) {
    SweepRow& row = result.rows[index];
    size_t rest = index;
    const size_t io = rest % n_omega;
    rest /= n_omega;
    const size_t ib = rest % n_beta;
    rest /= n_beta;
    const size_t ic = rest % n_crit;
    rest /= n_crit;
    const size_t ie = rest;
    row.eta = spec.eta_values[ie];
    row.crit_rate = spec.crit_values[ic];
    row.beta_rate = spec.beta_values[ib];
    row.omega = spec.omega_values[io];

    ScenarioConfig config = spec.base;
    config.eta = row.eta;
    config.crit_rate = row.crit_rate;
    config.beta_rate = row.beta_rate;
    config.omega = row.omega;
    try {
      const CascadeResult r = run_cascade(snapshot, dep, config);
      row.initial_failures = r.initial_failures;
      row.final_failures = r.final_failures;
      row.iterations = r.iterations;
      row.total_value_lost = r.total_value_lost;
    } catch (const Error& e) {
      row.error = e.what();
    }
  };

  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1 || grid < 2) {
    for (size_t k = 0; k < grid; ++k) run_point(k);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const size_t k = next.fetch_add(1);
        if (k >= grid) break;
        run_point(k);
      }
    };
    std::vector<std::thread> threads;
    const size_t n_threads = std::min<size_t>(jobs, grid);
    threads.reserve(n_threads);
    for (size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out =
      "eta,crit_rate,beta_rate,omega,initial_failures,final_failures,"
      "iterations,total_value_lost,error\n";
  for (const SweepRow& row : result.rows) {
    out += format_double(row.eta) + ',' + format_double(row.crit_rate) + ',' +
           format_double(row.beta_rate) + ',' + format_double(row.omega) + ',';
    if (row.error.empty()) {
      out += std::to_string(row.initial_failures) + ',' +
             std::to_string(row.final_failures) + ',' +
             std::to_string(row.iterations) + ',' +
             format_double(row.total_value_lost) + ',';
    } else {
      out += ",,,,";
    }
    out += row.error + '\n';
  }
  return out;
}

std::string heatmap_csv(const SweepResult& result, const std::string& x_param,
                        const std::string& y_param,
                        const std::string& z_column) {
  if (x_param == y_param)
    throw AmbiguousCell("heatmap axes must be two different parameters");
  const std::vector<Scalar>& xs = parameter_values(result.spec, x_param);
  const std::vector<Scalar>& ys = parameter_values(result.spec, y_param);
  if (xs.size() < 2 || ys.size() < 2)
    throw AmbiguousCell("heatmap axes need at least two swept values each");
  for (const char* name : {"eta", "crit_rate", "beta_rate", "omega"}) {
    if (name == x_param || name == y_param) continue;
    if (parameter_values(result.spec, name).size() > 1)
      throw AmbiguousCell("parameter '" + std::string(name) +
                          "' is not held fixed; cells would collapse " +
                          "multiple rows");
  }
  (void)row_column(SweepRow{}, z_column);  // validate the column name early

  std::string out = y_param + "\\" + x_param;
  for (Scalar x : xs) out += ',' + format_double(x);
  out += '\n';
  for (Scalar y : ys) {
    out += format_double(y);
    for (Scalar x : xs) {
      const SweepRow* cell = nullptr;
      for (const SweepRow& row : result.rows) {
        if (row_parameter(row, x_param) == x &&
            row_parameter(row, y_param) == y) {
          if (cell)
            throw AmbiguousCell("multiple rows map to one heatmap cell");
          cell = &row;
        }
      }
      out += ',';
      if (cell && cell->error.empty()) out += row_column(*cell, z_column);
    }
    out += '\n';
  }
  return out;
}

}  // namespace fundnet
