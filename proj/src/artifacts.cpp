// SPDX-License-Identifier: Apache-2.0

#include "v2xplace/artifacts.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace v2xplace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string render_samples_csv(std::span<const DelaySample> samples,
                               std::span<const ApplicationSpec> apps) {
  std::string out = "run,timestamp,vehicle,app,delay_ms,server,nc\n";
  for (const DelaySample& s : samples) {
    out += std::to_string(s.run);
    out += ',';
    out += format_double(s.timestamp_s);
    out += ',';
    out += std::to_string(s.vehicle);
    out += ',';
    out += apps[s.app].name;
    out += ',';
    out += format_double(s.delay_ms);
    out += ',';
    out += std::to_string(s.serving_server);
    out += ',';
    out += std::to_string(s.nc);
    out += '\n';
  }
  return out;
}

std::string render_histogram_csv(const Histogram& hist) {
  std::string out = "bin_left,bin_right,density\n";
  for (size_t b = 0; b < hist.densities.size(); ++b) {
    out += format_double(hist.bin_edges[b]);
    out += ',';
    out += format_double(hist.bin_edges[b + 1]);
    out += ',';
    out += format_double(hist.densities[b]);
    out += '\n';
  }
  return out;
}

std::string render_trajectory_csv(const TraceRun& run) {
  std::string out = "time,id,position,speed,lane,zone\n";
  for (const TraceSnapshot& snap : run.snapshots) {
    for (size_t i = 0; i < snap.states.size(); ++i) {
      const VehicleState& v = snap.states[i];
      out += format_double(snap.timestamp_s);
      out += ',';
      out += std::to_string(v.id);
      out += ',';
      out += format_double(v.position_m);
      out += ',';
      out += format_double(v.speed_mps);
      out += ',';
      out += std::to_string(v.lane);
      out += ',';
      out += std::to_string(snap.vehicles[i].serving_server);
      out += '\n';
    }
  }
  return out;
}

namespace {

ordered_json app_summary_to_json(const AppSummary& a) {
  ordered_json h;
  h["bin_edges"] = a.histogram.bin_edges;
  h["densities"] = a.histogram.densities;
  return {{"app", a.app},
          {"threshold_ms", a.threshold_ms},
          {"sample_count", a.count},
          {"empty", a.empty},
          {"mean_delay_ms", a.mean_ms},
          {"violation_rate", a.violation_rate},
          {"per_run_mean_ms", a.per_run_mean_ms},
          {"cross_run_mean_ms", a.cross_run_mean_ms},
          {"histogram", h}};
}

ordered_json summary_to_json(const SummaryReport& report) {
  ordered_json apps = ordered_json::array();
  for (const AppSummary& a : report.apps) apps.push_back(app_summary_to_json(a));
  return {{"total_samples", report.total_samples},
          {"runs", report.runs},
          {"applications", apps}};
}

}  // namespace

std::string render_summary_json(const SummaryReport& report,
                                const TrafficScenario& scenario,
                                std::uint64_t model_seed) {
  ordered_json j;
  j["scenario"] = scenario.name;
  j["arrival_rate_vph"] = scenario.arrival_rate_vph;
  j["duration_s"] = scenario.duration_s;
  j["snapshot_interval_s"] = scenario.snapshot_interval_s;
  j["runs"] = scenario.runs;
  j["scenario_seed"] = scenario.seed;
  j["model_seed"] = model_seed;
  j.update(summary_to_json(report));
  return j.dump(2) + "\n";
}

std::string render_placement_json(const SolveResult& result,
                                  const PlacementInstance& instance) {
  ordered_json j;
  j["solver"] = solver_name(result.tag);
  j["feasible"] = result.feasible();
  j["relaxed"] = result.relaxed;
  j["nodes_explored"] = result.nodes_explored;
  ordered_json thresholds = ordered_json::object();
  for (size_t a = 0; a < instance.applications.size(); ++a)
    thresholds[instance.applications[a].name] =
        a < result.enforced_thresholds_ms.size() ? result.enforced_thresholds_ms[a]
                                                 : instance.applications[a].delay_threshold_ms;
  j["enforced_thresholds_ms"] = thresholds;
  if (result.feasible()) {
    j["objective_ms"] = result.objective_ms;
    ordered_json assignments = ordered_json::array();
    for (int n = 0; n < result.placement->server_count(); ++n)
      assignments.push_back(
          {{"server", n}, {"service", to_string(result.placement->at(n))}});
    j["assignments"] = assignments;

    ConstraintReport report =
        check_constraints(*result.placement, instance, result.enforced_thresholds_ms);
    ordered_json constraints;
    constraints["ok"] = report.ok();
    constraints["one_service_per_server"] = report.one_service_per_server;
    ordered_json missing = ordered_json::array();
    for (ServiceKind k : report.missing_services) missing.push_back(to_string(k));
    constraints["missing_services"] = missing;
    ordered_json capacity = ordered_json::array();
    for (const auto& v : report.capacity_violations)
      capacity.push_back({{"server", v.server},
                          {"service", to_string(v.service)},
                          {"demand_cores", v.demand.cores},
                          {"demand_ram_gb", v.demand.ram_gb},
                          {"available_cores", v.available.cores},
                          {"available_ram_gb", v.available.ram_gb}});
    constraints["capacity_violations"] = capacity;
    ordered_json delays = ordered_json::array();
    for (const auto& v : report.delay_violations)
      delays.push_back({{"zone", v.zone},
                        {"app", v.app},
                        {"delay_ms", v.delay_ms},
                        {"threshold_ms", v.threshold_ms}});
    constraints["delay_violations"] = delays;
    j["constraints"] = constraints;
  } else {
    j["objective_ms"] = nullptr;
    j["assignments"] = ordered_json::array();
  }
  return j.dump(2) + "\n";
}

LoadedPlacement parse_placement_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("placement parse error: ") + e.what());
  }
  LoadedPlacement loaded;
  loaded.solver = j.value("solver", "unknown");
  loaded.feasible = j.value("feasible", false);
  if (!loaded.feasible)
    throw std::invalid_argument("placement artifact is infeasible; nothing to simulate");
  const auto& assignments = j.at("assignments");
  std::vector<ServiceKind> kinds(assignments.size(), ServiceKind::CA);
  for (const auto& a : assignments) {
    int server = a.at("server").get<int>();
    if (server < 0 || server >= static_cast<int>(kinds.size()))
      throw std::invalid_argument("placement artifact: server index out of range");
    kinds[server] = parse_service_kind(a.at("service").get<std::string>());
  }
  loaded.placement = Placement(std::move(kinds));
  return loaded;
}

std::string render_comparison_json(const ComparisonReport& report,
                                   const TrafficScenario& scenario) {
  ordered_json j;
  j["scenario"] = report.scenario;
  j["arrival_rate_vph"] = scenario.arrival_rate_vph;
  j["runs"] = scenario.runs;
  ordered_json strategies = ordered_json::array();
  for (const StrategyComparison& s : report.strategies) {
    ordered_json entry;
    entry["solver"] = solver_name(s.tag);
    entry["feasible"] = s.solve.feasible();
    entry["relaxed"] = s.solve.relaxed;
    if (s.solve.feasible()) {
      entry["objective_ms"] = s.solve.objective_ms;
      entry["summary"] = summary_to_json(s.summary);
    } else {
      entry["objective_ms"] = nullptr;
    }
    strategies.push_back(std::move(entry));
  }
  j["strategies"] = strategies;
  return j.dump(2) + "\n";
}

std::string render_sweep_json(const SweepReport& report) {
  ordered_json j;
  j["solver"] = solver_name(report.solve.tag);
  j["feasible"] = report.solve.feasible();
  j["scenarios"] = report.scenario_names;
  ordered_json steps = ordered_json::array();
  for (const SweepStep& step : report.steps) {
    ordered_json changes = ordered_json::array();
    for (const AppMeanChange& c : step.changes)
      changes.push_back({{"app", c.app},
                         {"mean_before_ms", c.mean_before_ms},
                         {"mean_after_ms", c.mean_after_ms},
                         {"relative_change", c.relative_change}});
    steps.push_back({{"from", step.from},
                     {"to", step.to},
                     {"changes", changes},
                     {"max_change_app", step.max_change_app}});
  }
  j["steps"] = steps;
  return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace v2xplace
