// SPDX-License-Identifier: Apache-2.0
//
// v2xplace command line: solve service placements, run traffic-driven delay
// simulations, compare placement strategies and sweep traffic densities.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "v2xplace/artifacts.hpp"
#include "v2xplace/config.hpp"

namespace fs = std::filesystem;
using namespace v2xplace;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
};

ExperimentConfig load(const CommonArgs& args) {
  ExperimentConfig cfg =
      args.config_path.empty() ? default_config() : load_config(args.config_path);
  if (args.seed) reseed(cfg, *args.seed);
  return cfg;
}

SolveOptions solve_options(const ExperimentConfig& cfg) {
  return {cfg.solver.node_budget, cfg.solver.enumeration_cap};
}

std::vector<TrafficScenario> select_scenarios(const ExperimentConfig& cfg,
                                              const std::string& name,
                                              std::optional<int> runs) {
  std::vector<TrafficScenario> scenarios;
  if (name.empty()) {
    scenarios = cfg.scenarios;
  } else {
    const TrafficScenario* s = find_scenario(cfg, name);
    if (!s) throw ConfigError("unknown scenario: " + name);
    scenarios = {*s};
  }
  if (runs)
    for (auto& s : scenarios) s.runs = *runs;
  return scenarios;
}

int run_place(const CommonArgs& args, const std::string& solver_override) {
  ExperimentConfig cfg = load(args);
  if (!solver_override.empty()) cfg.solver.name = solver_override;
  PlacementInstance instance = build_instance(cfg);
  SolveResult result =
      solve_with(parse_solver_tag(cfg.solver.name), instance, solve_options(cfg));

  fs::create_directories(args.out_dir);
  fs::path out = fs::path(args.out_dir) / "placement.json";
  write_text_file(out, render_placement_json(result, instance));

  if (!result.feasible()) {
    std::cout << "infeasible (" << cfg.solver.name << "), details in " << out.string()
              << "\n";
    return kExitInfeasible;
  }
  std::cout << cfg.solver.name << " placement, objective "
            << format_double(result.objective_ms) << " ms"
            << (result.relaxed ? " (relaxed thresholds)" : "") << ":\n";
  for (int n = 0; n < result.placement->server_count(); ++n)
    std::cout << "  server " << n << " -> " << to_string(result.placement->at(n))
              << "\n";
  std::cout << "written to " << out.string() << "\n";
  return kExitOk;
}

int run_simulate(const CommonArgs& args, const std::string& placement_path,
                 const std::string& scenario_name, std::optional<int> runs) {
  ExperimentConfig cfg = load(args);
  PlacementInstance instance = build_instance(cfg);

  fs::path placement_file = placement_path.empty()
                                ? fs::path(args.out_dir) / "placement.json"
                                : fs::path(placement_path);
  LoadedPlacement loaded = parse_placement_json(read_text_file(placement_file));
  if (loaded.placement.server_count() != static_cast<int>(instance.servers.size()))
    throw ConfigError("placement artifact has " +
                      std::to_string(loaded.placement.server_count()) +
                      " servers but the topology has " +
                      std::to_string(instance.servers.size()));

  fs::create_directories(args.out_dir);
  for (const TrafficScenario& scenario : select_scenarios(cfg, scenario_name, runs)) {
    auto samples = run_simulation(loaded.placement, scenario, cfg.latency_model,
                                  instance, cfg.mobility);
    SummaryReport summary =
        summarize(samples, instance.applications, cfg.histogram_bins);
    fs::path csv = fs::path(args.out_dir) / ("samples_" + scenario.name + ".csv");
    fs::path json = fs::path(args.out_dir) / ("summary_" + scenario.name + ".json");
    write_text_file(csv, render_samples_csv(samples, instance.applications));
    write_text_file(json,
                    render_summary_json(summary, scenario, cfg.latency_model.seed));
    std::cout << scenario.name << ": " << samples.size() << " samples -> "
              << csv.string() << ", " << json.string() << "\n";
  }
  return kExitOk;
}

int run_compare(const CommonArgs& args, std::vector<std::string> solver_names,
                const std::string& scenario_name, std::optional<int> runs) {
  ExperimentConfig cfg = load(args);
  PlacementInstance instance = build_instance(cfg);
  if (solver_names.empty()) solver_names = {"rdp", "raa"};
  std::vector<SolverTag> tags;
  for (const auto& name : solver_names) tags.push_back(parse_solver_tag(name));

  fs::create_directories(args.out_dir);
  for (const TrafficScenario& scenario : select_scenarios(cfg, scenario_name, runs)) {
    ComparisonReport report =
        compare_strategies(tags, scenario, cfg.latency_model, instance, cfg.mobility,
                           cfg.histogram_bins, solve_options(cfg));
    fs::path json = fs::path(args.out_dir) / ("comparison_" + scenario.name + ".json");
    write_text_file(json, render_comparison_json(report, scenario));
    for (const StrategyComparison& strategy : report.strategies) {
      if (!strategy.solve.feasible()) {
        std::cout << scenario.name << ": " << solver_name(strategy.tag)
                  << " infeasible, excluded\n";
        continue;
      }
      for (const AppSummary& app : strategy.summary.apps) {
        if (app.empty) continue;
        fs::path hist = fs::path(args.out_dir) /
                        ("hist_" + scenario.name + "_" + solver_name(strategy.tag) +
                         "_" + app.app + ".csv");
        write_text_file(hist, render_histogram_csv(app.histogram));
      }
    }
    std::cout << scenario.name << ": comparison written to " << json.string() << "\n";
  }
  return kExitOk;
}

int run_sweep(const CommonArgs& args, const std::string& solver_override) {
  ExperimentConfig cfg = load(args);
  if (!solver_override.empty()) cfg.solver.name = solver_override;
  if (cfg.scenarios.size() < 2)
    throw ConfigError("sweep needs at least two scenarios in the config");
  PlacementInstance instance = build_instance(cfg);

  SweepReport report =
      density_sweep(cfg.scenarios, instance, parse_solver_tag(cfg.solver.name),
                    cfg.latency_model, cfg.mobility, cfg.histogram_bins,
                    solve_options(cfg));
  fs::create_directories(args.out_dir);
  fs::path json = fs::path(args.out_dir) / "sweep.json";
  write_text_file(json, render_sweep_json(report));
  if (!report.solve.feasible()) {
    std::cout << "infeasible (" << cfg.solver.name << "), details in " << json.string()
              << "\n";
    return kExitInfeasible;
  }
  for (const SweepStep& step : report.steps)
    std::cout << step.from << " -> " << step.to
              << ": largest mean-delay increase in " << step.max_change_app << "\n";
  std::cout << "written to " << json.string() << "\n";
  return kExitOk;
}

int run_config_init(const std::string& path, std::optional<std::uint64_t> seed) {
  ExperimentConfig cfg = default_config();
  if (seed) reseed(cfg, *seed);
  save_config(cfg, path);
  std::cout << "wrote " << path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-aware placement of V2X basic services on highway edge servers"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string solver_override;
  std::string scenario_name;
  std::string placement_path;
  std::vector<std::string> compare_solvers;
  std::string config_init_path = "config.json";
  std::optional<int> runs;
  int exit_code = kExitOk;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path, "Config file (defaults apply if omitted)");
    cmd->add_option("--out", common.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", common.seed, "Override the global seed");
  };

  CLI::App* place = app.add_subcommand("place", "Solve the service placement");
  add_common(place);
  place->add_option("--solver", solver_override, "exact|rdp|raa|oracle");
  place->callback([&] { exit_code = run_place(common, solver_override); });

  CLI::App* simulate =
      app.add_subcommand("simulate", "Evaluate a placement against simulated traffic");
  add_common(simulate);
  simulate->add_option("--placement", placement_path,
                       "Placement artifact (default: <out>/placement.json)");
  simulate->add_option("--scenario", scenario_name, "Run a single named scenario");
  simulate->add_option("--runs", runs, "Override runs per scenario");
  simulate->callback(
      [&] { exit_code = run_simulate(common, placement_path, scenario_name, runs); });

  CLI::App* compare =
      app.add_subcommand("compare", "Compare placement strategies under paired traffic");
  add_common(compare);
  compare->add_option("--solver", compare_solvers,
                      "Strategies to compare (repeatable; default rdp raa)");
  compare->add_option("--scenario", scenario_name, "Compare on a single named scenario");
  compare->add_option("--runs", runs, "Override runs per scenario");
  compare->callback(
      [&] { exit_code = run_compare(common, compare_solvers, scenario_name, runs); });

  CLI::App* sweep =
      app.add_subcommand("sweep", "Mean-delay change across the configured densities");
  add_common(sweep);
  sweep->add_option("--solver", solver_override, "exact|rdp|raa|oracle");
  sweep->callback([&] { exit_code = run_sweep(common, solver_override); });

  CLI::App* config_cmd = app.add_subcommand("config", "Configuration helpers");
  config_cmd->require_subcommand(1);
  CLI::App* config_init =
      config_cmd->add_subcommand("init", "Write a config file with all defaults inlined");
  config_init->add_option("path", config_init_path, "Destination file")
      ->capture_default_str();
  config_init->add_option("--seed", common.seed, "Global seed to bake in");
  config_init->callback(
      [&] { exit_code = run_config_init(config_init_path, common.seed); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return exit_code;
}
