#include "fundnet/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fundnet/cascade.hpp"
#include "fundnet/centrality.hpp"
#include "fundnet/csv.hpp"
#include "fundnet/errors.hpp"
#include "fundnet/generator.hpp"
#include "fundnet/histogram.hpp"
#include "fundnet/io.hpp"
#include "fundnet/mixing.hpp"
#include "fundnet/stability.hpp"
#include "fundnet/sweep.hpp"

namespace fundnet {

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitValidation = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_out_dir(const std::string& out) {
  if (out.empty())
    throw UsageError(
        "no output directory: pass --out or set FUNDNET_OUT");
}

/// Overwrite guard: outputs are only replaced under --force.
void refuse_overwrite(const fs::path& sentinel, bool force) {
  if (!force && fs::exists(sentinel))
    throw IoError(sentinel.string() +
                  " already exists; pass --force to overwrite");
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? "."
                                                    : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::int32_t> resolve_assets(const MarketSnapshot& snapshot,
                                         const std::vector<std::string>& ids) {
  std::vector<std::int32_t> indices;
  for (const std::string& id : ids) {
    const auto it = snapshot.asset_index.find(id);
    if (it == snapshot.asset_index.end())
      throw UnknownAsset("unknown asset id '" + id + "'");
    indices.push_back(it->second);
  }
  return indices;
}

std::string histogram_csv(const std::map<int, int>& hist) {
  std::string out = "degree,count\n";
  for (const auto& [degree, count] : hist)
    out += std::to_string(degree) + ',' + std::to_string(count) + '\n';
  return out;
}

// ---- generate ----

struct GenerateArgs {
  GeneratorConfig config;
  std::string out;
  bool force = false;
  int periods = 1;
  double churn = 0.05;
};

int cmd_generate(const GenerateArgs& args) {
  require_out_dir(args.out);
  const fs::path out_dir(args.out);
  refuse_overwrite(out_dir / "manifest.json", args.force);
  refuse_overwrite(out_dir / "funds.csv", args.force);

  std::vector<MarketSnapshot> series =
      args.periods == 1
          ? std::vector<MarketSnapshot>{generate_market(args.config)}
          : snapshot_series(args.config, args.periods, args.churn);

  std::vector<std::string> dates;
  for (const MarketSnapshot& snapshot : series) {
    const fs::path dir =
        args.periods == 1 ? out_dir : out_dir / snapshot.date;
    save_bundle(snapshot, dir);
    dates.push_back(snapshot.date);
    std::cerr << "wrote bundle " << dir.string() << " (" << snapshot.fund_count()
              << " funds, " << snapshot.asset_count() << " assets, "
              << snapshot.cross.entries().size() << " cross-holdings)\n";
  }

  nlohmann::json manifest;
  manifest["command"] = "generate";
  manifest["seed"] = args.config.seed;
  manifest["n_funds"] = args.config.n_funds;
  manifest["n_assets"] = args.config.n_assets;
  manifest["mean_cross_degree"] = args.config.mean_cross_degree;
  manifest["mean_asset_degree"] = args.config.mean_asset_degree;
  manifest["dominant_share"] = args.config.dominant_share;
  manifest["dominant_participation"] = args.config.dominant_participation;
  manifest["open_fraction"] = args.config.open_fraction;
  manifest["periods"] = args.periods;
  manifest["churn"] = args.churn;
  manifest["dates"] = dates;
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return kExitOk;
}

// ---- metrics ----

struct MetricsArgs {
  std::string bundle;
  std::vector<std::string> series;
  std::vector<std::string> assortativity_by = {"administrator", "class"};
  std::string out;
  bool force = false;
  int jobs = 1;
};

std::string centrality_csv(const MarketSnapshot& snapshot,
                           const CentralityReport& report) {
  std::string out =
      "node_id,degree_in,degree_out,closeness,betweenness,eigenvector\n";
  for (int i = 0; i < snapshot.fund_count(); ++i) {
    out += snapshot.funds[i].id + ',' + std::to_string(report.degree_in[i]) +
           ',' + std::to_string(report.degree_out[i]) + ',' +
           format_double(report.closeness[i]) + ',' +
           format_double(report.betweenness[i]) + ',';
    if (report.eigenvector) out += format_double((*report.eigenvector)[i]);
    out += '\n';
  }
  return out;
}

nlohmann::json metrics_summary(const MarketSnapshot& snapshot,
                               const DirectedWeightedGraph& cross_graph,
                               const BipartiteGraph& fund_asset,
                               const CentralityReport& report,
                               const std::vector<std::string>& assort_by) {
  const int n = snapshot.fund_count();
  nlohmann::json j;
  j["date"] = snapshot.date;
  j["funds"] = n;
  j["assets"] = snapshot.asset_count();
  int open = 0;
  for (const FundInfo& f : snapshot.funds) open += f.open_ended ? 1 : 0;
  j["open_funds"] = open;
  j["crossholdings_edges"] = cross_graph.edge_count();
  j["holdings_edges"] = fund_asset.edge_count();
  j["density"]["crossholdings"] = n >= 2 ? density(cross_graph) : 0.0;
  j["density"]["fund_asset"] = density(fund_asset);
  j["mean_degree"]["crossholdings"] =
      static_cast<double>(cross_graph.edge_count()) / n;
  j["mean_degree"]["fund_asset"] =
      static_cast<double>(fund_asset.edge_count()) / n;

  // degree centrality is normalized by n-1 only here, in the report
  j["max_centrality"]["degree_in_normalized"] =
      n > 1 ? static_cast<double>(report.max_degree_in()) / (n - 1) : 0.0;
  j["max_centrality"]["degree_out_normalized"] =
      n > 1 ? static_cast<double>(report.max_degree_out()) / (n - 1) : 0.0;
  j["max_centrality"]["closeness"] = report.max_closeness();
  j["max_centrality"]["betweenness"] = report.max_betweenness();
  j["max_centrality"]["betweenness_normalized"] =
      n > 2 ? report.max_betweenness() /
                  (static_cast<double>(n - 1) * static_cast<double>(n - 2))
            : 0.0;
  j["max_centrality"]["eigenvector"] = report.max_eigenvector();
  j["eigenvector_converged"] = report.eigenvector.has_value();
  j["weakly_connected"] = report.weakly_connected;

  for (const std::string& column : assort_by) {
    std::vector<std::string> labels;
    labels.reserve(snapshot.funds.size());
    for (const FundInfo& f : snapshot.funds)
      labels.push_back(column == "administrator" ? f.administrator
                                                 : f.fund_class);
    try {
      j["assortativity"][column] = assortativity(cross_graph, labels);
    } catch (const ValidationError& e) {
      j["assortativity"][column] = nullptr;
      j["assortativity_notes"][column] = e.what();
    }
  }

  int max_asset_degree = 0, max_asset_degree_no_cash = 0;
  std::string top_asset, top_asset_no_cash;
  for (int a = 0; a < fund_asset.asset_count(); ++a) {
    const int d = fund_asset.asset_degree(a);
    if (d > max_asset_degree) {
      max_asset_degree = d;
      top_asset = snapshot.assets[a].id;
    }
    if (snapshot.assets[a].asset_class != "cash" &&
        d > max_asset_degree_no_cash) {
      max_asset_degree_no_cash = d;
      top_asset_no_cash = snapshot.assets[a].id;
    }
  }
  j["max_asset_degree"] = {{"id", top_asset}, {"degree", max_asset_degree}};
  j["max_asset_degree_excluding_cash"] = {{"id", top_asset_no_cash},
                                          {"degree", max_asset_degree_no_cash}};

  const Vec& totals = snapshot.holdings.asset_totals();
  int dominant = 0;
  for (int a = 1; a < totals.size(); ++a)
    if (totals[a] > totals[dominant]) dominant = a;
  if (totals.size() > 0) {
    j["dominant_asset"] = {
        {"id", snapshot.assets[dominant].id},
        {"share_of_total_value", totals[dominant] / totals.sum()}};
  }
  return j;
}

int cmd_metrics(const MetricsArgs& args) {
  require_out_dir(args.out);
  if (args.bundle.empty() && args.series.empty())
    throw UsageError("metrics needs a bundle path or --series");
  for (const std::string& column : args.assortativity_by) {
    if (column != "administrator" && column != "class")
      throw UsageError("--assortativity-by accepts 'administrator' or "
                       "'class', got '" +
                       column + "'");
  }
  const fs::path out_dir(args.out);

  if (!args.bundle.empty()) {
    refuse_overwrite(out_dir / "centrality.csv", args.force);
    LoadStats stats;
    const MarketSnapshot snapshot = load_bundle(args.bundle, &stats);
    if (stats.dropped_assets > 0)
      std::cerr << "dropped " << stats.dropped_assets
                << " assets with no holders\n";
    const DirectedWeightedGraph cross_graph = snapshot.crossholdings_graph();
    const BipartiteGraph fund_asset = snapshot.holdings_graph();
    const CentralityReport report =
        centrality_report(cross_graph, PairCounting::Directed, args.jobs);

    write_text(out_dir / "centrality.csv", centrality_csv(snapshot, report));
    write_text(out_dir / "histogram.csv",
               histogram_csv(degree_histogram(cross_graph, DegreeKind::In)));
    write_text(out_dir / "histogram_out.csv",
               histogram_csv(degree_histogram(cross_graph, DegreeKind::Out)));
    write_text(
        out_dir / "histogram_fund.csv",
        histogram_csv(degree_histogram(fund_asset, DegreeKind::BipartiteFund)));
    write_text(out_dir / "histogram_asset.csv",
               histogram_csv(
                   degree_histogram(fund_asset, DegreeKind::BipartiteAsset)));
    write_text(out_dir / "summary.json",
               metrics_summary(snapshot, cross_graph, fund_asset, report,
                               args.assortativity_by)
                       .dump(2) +
                   "\n");
    std::cerr << "metrics written to " << out_dir.string() << '\n';
  }

  if (!args.series.empty()) {
    refuse_overwrite(out_dir / "stability.csv", args.force);
    std::vector<NetworkMembership> memberships;
    for (const std::string& path : args.series) {
      const MarketSnapshot snapshot = load_bundle(path);
      NetworkMembership m;
      m.period = snapshot.date;
      for (const FundInfo& f : snapshot.funds) m.nodes.push_back(f.id);
      for (const CrossHoldingEntry& e : snapshot.cross.entries())
        m.edges.emplace_back(snapshot.funds[e.investor].id,
                             snapshot.funds[e.investee].id);
      memberships.push_back(std::move(m));
    }
    const StabilityReport report = jaccard_stability(memberships);
    std::string csv = "period_a,period_b,node_jaccard,edge_jaccard\n";
    for (const StabilityEntry& e : report)
      csv += e.period_a + ',' + e.period_b + ',' +
             format_double(e.node_jaccard) + ',' +
             format_double(e.edge_jaccard) + '\n';
    write_text(out_dir / "stability.csv", csv);
    std::cerr << "stability written to " << out_dir.string() << '\n';
  }
  return kExitOk;
}

// ---- simulate / sweep ----

struct ScenarioArgs {
  std::string bundle;
  std::vector<std::string> shock_assets;
  std::string preset;
  double eta = 0.3;
  double crit_rate = 0.7;
  double beta_rate = 0.1;
  double omega = 0.0;
  int max_iterations = 0;
};

void apply_preset(ScenarioArgs& args, const CLI::App* cmd) {
  if (args.preset.empty()) return;
  // Named shock presets; explicit flags win over the preset.
  double eta = 0.3, crit = 0.7;
  if (args.preset == "stress15") {
    eta = 0.15;
    crit = 0.85;
  }
  if (cmd->count("--eta") == 0) args.eta = eta;
  if (cmd->count("--crit-rate") == 0) args.crit_rate = crit;
}

ScenarioConfig scenario_from_args(const MarketSnapshot& snapshot,
                                  const ScenarioArgs& args) {
  ScenarioConfig config;
  config.shocked_assets = resolve_assets(snapshot, args.shock_assets);
  config.eta = args.eta;
  config.crit_rate = args.crit_rate;
  config.beta_rate = args.beta_rate;
  config.omega = args.omega;
  config.max_iterations = args.max_iterations;
  return config;
}

struct SimulateArgs {
  ScenarioArgs scenario;
  std::string out;
  bool force = false;
};

int cmd_simulate(const SimulateArgs& args) {
  require_out_dir(args.out);
  const fs::path out_dir(args.out);
  refuse_overwrite(out_dir / "cascade.json", args.force);

  const MarketSnapshot snapshot = load_bundle(args.scenario.bundle);
  const ScenarioConfig config = scenario_from_args(snapshot, args.scenario);
  const DependencyMatrix dep = dependency_matrix(snapshot.cross);
  const CascadeResult result = run_cascade(snapshot, dep, config);

  write_text(out_dir / "cascade.json",
             cascade_to_json(result, config, snapshot) + "\n");
  write_text(out_dir / "summary.csv",
             cascade_summary_csv_header() +
                 cascade_summary_csv_row(result, config, snapshot));
  std::cerr << "cascade: " << result.initial_failures << " initial -> "
            << result.final_failures << " final failures in "
            << result.iterations << " iterations ("
            << (result.termination_reason == TerminationReason::Converged
                    ? "converged"
                    : "max iterations")
            << ")\n";
  return kExitOk;
}

struct SweepArgs {
  ScenarioArgs scenario;
  std::vector<double> eta_values;
  std::vector<double> crit_values;
  std::vector<double> beta_values;
  std::vector<double> omega_values;
  std::vector<std::string> heatmaps;
  int jobs = 1;
  std::string out;
  bool force = false;
};

int cmd_sweep(const SweepArgs& args) {
  require_out_dir(args.out);
  const fs::path out_dir(args.out);
  refuse_overwrite(out_dir / "sweep.csv", args.force);

  const MarketSnapshot snapshot = load_bundle(args.scenario.bundle);
  SweepSpec spec;
  spec.base = scenario_from_args(snapshot, args.scenario);
  spec.eta_values = args.eta_values.empty()
                        ? std::vector<double>{args.scenario.eta}
                        : args.eta_values;
  spec.crit_values = args.crit_values.empty()
                         ? std::vector<double>{args.scenario.crit_rate}
                         : args.crit_values;
  spec.beta_values = args.beta_values.empty()
                         ? std::vector<double>{args.scenario.beta_rate}
                         : args.beta_values;
  spec.omega_values = args.omega_values.empty()
                          ? std::vector<double>{args.scenario.omega}
                          : args.omega_values;
  spec.jobs = args.jobs;

  const auto started = std::chrono::steady_clock::now();
  const DependencyMatrix dep = dependency_matrix(snapshot.cross);
  const SweepResult result = run_sweep(snapshot, dep, spec);
  const auto elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - started)
                              .count();

  write_text(out_dir / "sweep.csv", sweep_csv(result));
  for (const std::string& request : args.heatmaps) {
    std::vector<std::string> parts;
    size_t start = 0;
    for (;;) {
      const size_t comma = request.find(',', start);
      if (comma == std::string::npos) {
        parts.push_back(request.substr(start));
        break;
      }
      parts.push_back(request.substr(start, comma - start));
      start = comma + 1;
    }
    if (parts.size() != 3)
      throw UsageError("--heatmap expects x_param,y_param,z_column, got '" +
                       request + "'");
    write_text(out_dir / ("heatmap_" + parts[2] + ".csv"),
               heatmap_csv(result, parts[0], parts[1], parts[2]));
  }

  nlohmann::json manifest;
  manifest["command"] = "sweep";
  manifest["bundle_date"] = snapshot.date;
  std::vector<std::string> shocked;
  for (std::int32_t a : spec.base.shocked_assets)
    shocked.push_back(snapshot.assets[a].id);
  manifest["shocked_assets"] = shocked;
  manifest["eta_values"] = spec.eta_values;
  manifest["crit_values"] = spec.crit_values;
  manifest["beta_values"] = spec.beta_values;
  manifest["omega_values"] = spec.omega_values;
  manifest["rows"] = result.rows.size();
  manifest["jobs"] = spec.jobs;
  manifest["elapsed_ms"] = elapsed_ms;
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");

  std::cerr << "sweep: " << result.rows.size() << " grid points in "
            << elapsed_ms << " ms\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"fundnet: investment-fund network contagion toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand(
      "generate", "Generate a synthetic market snapshot bundle");
  generate->add_option("--funds", gen.config.n_funds, "Number of funds");
  generate->add_option("--assets", gen.config.n_assets, "Number of assets");
  generate->add_option("--seed", gen.config.seed, "RNG seed");
  generate->add_option("--mean-cross-degree", gen.config.mean_cross_degree,
                       "Target cross-holding edges per fund");
  generate->add_option("--mean-asset-degree", gen.config.mean_asset_degree,
                       "Target holdings rows per fund");
  generate->add_option("--dominant-share", gen.config.dominant_share,
                       "Dominant asset's share of total value");
  generate->add_option("--dominant-participation",
                       gen.config.dominant_participation,
                       "Fraction of funds holding the dominant asset");
  generate->add_option("--admin-affinity", gen.config.admin_affinity,
                       "Probability an investee shares the administrator");
  generate->add_option("--open-fraction", gen.config.open_fraction,
                       "Fraction of open-ended funds");
  generate->add_option("--administrators", gen.config.n_administrators,
                       "Administrator count (0 = auto)");
  generate->add_option("--date", gen.config.date, "Date label (YYYY-MM)");
  generate->add_option("--periods", gen.periods,
                       "Number of monthly snapshots");
  generate->add_option("--churn", gen.churn,
                       "Cross-holding edge churn between periods");
  generate->add_option("--out", gen.out, "Output bundle directory")
      ->envname("FUNDNET_OUT");
  generate->add_flag("--force", gen.force, "Overwrite existing outputs");

  MetricsArgs met;
  CLI::App* metrics = app.add_subcommand(
      "metrics", "Topology reports for a snapshot bundle");
  metrics->add_option("bundle", met.bundle, "Snapshot bundle directory");
  metrics->add_option("--series", met.series,
                      "Time-ordered bundles for stability analysis");
  metrics->add_option("--assortativity-by", met.assortativity_by,
                      "Label columns (administrator, class)");
  metrics->add_option("--jobs", met.jobs, "Worker threads for betweenness");
  metrics->add_option("--out", met.out, "Output directory")
      ->envname("FUNDNET_OUT");
  metrics->add_flag("--force", met.force, "Overwrite existing outputs");

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run one cascading-failure scenario");
  simulate->add_option("bundle", sim.scenario.bundle, "Snapshot bundle")
      ->required();
  simulate
      ->add_option("--shock-assets", sim.scenario.shock_assets,
                   "Comma-separated asset ids to shock")
      ->delimiter(',')
      ->required();
  simulate->add_option("--eta", sim.scenario.eta,
                       "Fraction of value shocked assets retain");
  simulate->add_option("--crit-rate", sim.scenario.crit_rate,
                       "Critical value rate");
  simulate->add_option("--beta-rate", sim.scenario.beta_rate,
                       "Failure cost rate");
  simulate->add_option("--omega", sim.scenario.omega, "Fire-sale pressure");
  simulate->add_option("--max-iterations", sim.scenario.max_iterations,
                       "Round limit (0 = funds + 2)");
  simulate
      ->add_option("--preset", sim.scenario.preset,
                   "Scenario preset: stress30 (eta 0.3, crit 0.7) or "
                   "stress15 (eta 0.15, crit 0.85)")
      ->check(CLI::IsMember({"stress30", "stress15"}));
  simulate->add_option("--out", sim.out, "Output directory")
      ->envname("FUNDNET_OUT");
  simulate->add_flag("--force", sim.force, "Overwrite existing outputs");

  SweepArgs swp;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Parameter-grid cascade experiment");
  sweep->add_option("bundle", swp.scenario.bundle, "Snapshot bundle")
      ->required();
  sweep
      ->add_option("--shock-assets", swp.scenario.shock_assets,
                   "Comma-separated asset ids to shock")
      ->delimiter(',')
      ->required();
  sweep->add_option("--eta", swp.eta_values, "Eta grid values")
      ->delimiter(',');
  sweep->add_option("--crit-rate", swp.crit_values, "Critical rate grid")
      ->delimiter(',');
  sweep->add_option("--beta-rate", swp.beta_values, "Failure cost grid")
      ->delimiter(',');
  sweep->add_option("--omega", swp.omega_values, "Fire-sale pressure grid")
      ->delimiter(',');
  sweep->add_option("--max-iterations", swp.scenario.max_iterations,
                    "Round limit (0 = funds + 2)");
  sweep->add_option("--jobs", swp.jobs, "Parallel grid workers");
  sweep->add_option("--heatmap", swp.heatmaps,
                    "Repeatable x_param,y_param,z_column matrix export");
  sweep->add_option("--out", swp.out, "Output directory")
      ->envname("FUNDNET_OUT");
  sweep->add_flag("--force", swp.force, "Overwrite existing outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (metrics->parsed()) return cmd_metrics(met);
    if (simulate->parsed()) {
      apply_preset(sim.scenario, simulate);
      return cmd_simulate(sim);
    }
    if (sweep->parsed()) {
      apply_preset(swp.scenario, sweep);
      return cmd_sweep(swp);
    }
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnknownAsset& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InfeasibleTargets& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const UnknownParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const AmbiguousCell& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace fundnet
