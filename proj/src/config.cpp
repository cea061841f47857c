// SPDX-License-Identifier: Apache-2.0

#include "v2xplace/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "v2xplace/rng.hpp"

namespace v2xplace {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json resources_to_json(const ResourceVector& r) {
  return {{"cores", r.cores}, {"ram_gb", r.ram_gb}};
}

ResourceVector resources_from_json(const ordered_json& j, const ResourceVector& fallback) {
  ResourceVector r = fallback;
  r.cores = j.value("cores", r.cores);
  r.ram_gb = j.value("ram_gb", r.ram_gb);
  return r;
}

}  // namespace

void reseed(ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  for (size_t k = 0; k < cfg.scenarios.size(); ++k)
    cfg.scenarios[k].seed = mix_seed(seed, 1000 + static_cast<std::uint64_t>(k));
  cfg.latency_model.seed = mix_seed(seed, 2000);
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.services = default_service_catalog();
  cfg.applications = default_application_catalog();

  TrafficScenario moderate;
  moderate.name = "moderate";
  moderate.arrival_rate_vph = 1500.0;
  TrafficScenario heavy;
  heavy.name = "heavy";
  heavy.arrival_rate_vph = 1800.0;
  cfg.scenarios = {moderate, heavy};

  reseed(cfg, cfg.seed);
  return cfg;
}

ExperimentConfig parse_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = json_text.empty() ? ordered_json::object() : ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  try {
    ExperimentConfig cfg = default_config();
    cfg.seed = j.value("seed", cfg.seed);
    reseed(cfg, cfg.seed);

    if (j.contains("topology")) {
      const auto& t = j["topology"];
      cfg.topology.server_count = t.value("server_count", cfg.topology.server_count);
      cfg.topology.spacing_m = t.value("spacing_m", cfg.topology.spacing_m);
      if (t.contains("capacity"))
        cfg.topology.capacity = resources_from_json(t["capacity"], cfg.topology.capacity);
      if (t.contains("ldm_demand"))
        cfg.topology.ldm_demand =
            resources_from_json(t["ldm_demand"], cfg.topology.ldm_demand);
      if (t.contains("migration_reserve"))
        cfg.topology.migration_reserve =
            resources_from_json(t["migration_reserve"], cfg.topology.migration_reserve);
    }

    if (j.contains("services")) {
      cfg.services = default_service_catalog();
      for (const auto& s : j["services"]) {
        ServiceKind kind = parse_service_kind(s.at("kind").get<std::string>());
        ServiceSpec& spec = cfg.services[index_of(kind)];
        spec.demand.cores = s.value("cores", spec.demand.cores);
        spec.demand.ram_gb = s.value("ram_gb", spec.demand.ram_gb);
      }
    }

    if (j.contains("applications")) {
      cfg.applications.clear();
      for (const auto& a : j["applications"]) {
        ApplicationSpec app;
        app.name = a.at("name").get<std::string>();
        for (const auto& s : a.at("services"))
          app.required_services.push_back(parse_service_kind(s.get<std::string>()));
        app.delay_threshold_ms = a.at("delay_threshold_ms").get<double>();
        app.reliability_pct = a.at("reliability_pct").get<double>();
        app.validate();
        cfg.applications.push_back(std::move(app));
      }
    }

    if (j.contains("delay")) {
      const auto& d = j["delay"];
      cfg.delay.d_com_ms = d.value("d_com_ms", cfg.delay.d_com_ms);
      cfg.delay.d_dl_ms = d.value("d_dl_ms", cfg.delay.d_dl_ms);
      cfg.delay.gamma = d.value("gamma", cfg.delay.gamma);
      cfg.delay.density_log_base = d.value("density_log_base", cfg.delay.density_log_base);
      cfg.delay.nc_reference = d.value("nc_reference", cfg.delay.nc_reference);
      cfg.delay.validate();
    }

    if (j.contains("latency_model")) {
      const auto& m = j["latency_model"];
      if (m.contains("processing_ms")) {
        cfg.latency_model.processing_min_ms = m["processing_ms"].at(0).get<double>();
        cfg.latency_model.processing_max_ms = m["processing_ms"].at(1).get<double>();
      }
      if (m.contains("transmission_ms")) {
        cfg.latency_model.transmission_min_ms = m["transmission_ms"].at(0).get<double>();
        cfg.latency_model.transmission_max_ms = m["transmission_ms"].at(1).get<double>();
      }
      cfg.latency_model.seed = m.value("seed", cfg.latency_model.seed);
      cfg.latency_model.validate();
    }

    if (j.contains("mobility")) {
      const auto& m = j["mobility"];
      cfg.mobility.max_speed_mps = m.value("max_speed_mps", cfg.mobility.max_speed_mps);
      cfg.mobility.max_accel_mps2 = m.value("max_accel_mps2", cfg.mobility.max_accel_mps2);
      cfg.mobility.max_decel_mps2 = m.value("max_decel_mps2", cfg.mobility.max_decel_mps2);
      cfg.mobility.min_gap_m = m.value("min_gap_m", cfg.mobility.min_gap_m);
      cfg.mobility.highway_length_m =
          m.value("highway_length_m", cfg.mobility.highway_length_m);
      cfg.mobility.lane_count = m.value("lane_count", cfg.mobility.lane_count);
      cfg.mobility.time_step_s = m.value("time_step_s", cfg.mobility.time_step_s);
      cfg.mobility.validate();
    }

    if (j.contains("scenarios")) {
      cfg.scenarios.clear();
      size_t k = 0;
      for (const auto& s : j["scenarios"]) {
        TrafficScenario scenario;
        scenario.name = s.value("name", "scenario" + std::to_string(k));
        scenario.arrival_rate_vph = s.at("arrival_rate_vph").get<double>();
        scenario.duration_s = s.value("duration_s", scenario.duration_s);
        scenario.snapshot_interval_s =
            s.value("snapshot_interval_s", scenario.snapshot_interval_s);
        scenario.runs = s.value("runs", scenario.runs);
        scenario.seed = s.value("seed", mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(k)));
        scenario.validate();
        cfg.scenarios.push_back(std::move(scenario));
        ++k;
      }
    }

    if (j.contains("solver")) {
      const auto& s = j["solver"];
      cfg.solver.name = s.value("name", cfg.solver.name);
      parse_solver_tag(cfg.solver.name);  // rejects unknown names early
      cfg.solver.node_budget = s.value("node_budget", cfg.solver.node_budget);
      cfg.solver.enumeration_cap = s.value("enumeration_cap", cfg.solver.enumeration_cap);
    }

    cfg.histogram_bins = j.value("histogram_bins", cfg.histogram_bins);
    if (cfg.histogram_bins < 1) throw ConfigError("histogram_bins must be >= 1");
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string render_config_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["seed"] = cfg.seed;
  j["topology"] = {{"server_count", cfg.topology.server_count},
                   {"spacing_m", cfg.topology.spacing_m},
                   {"capacity", resources_to_json(cfg.topology.capacity)},
                   {"ldm_demand", resources_to_json(cfg.topology.ldm_demand)},
                   {"migration_reserve", resources_to_json(cfg.topology.migration_reserve)}};
  j["services"] = ordered_json::array();
  for (const auto& s : cfg.services)
    j["services"].push_back({{"kind", to_string(s.kind)},
                             {"cores", s.demand.cores},
                             {"ram_gb", s.demand.ram_gb}});
  j["applications"] = ordered_json::array();
  for (const auto& a : cfg.applications) {
    ordered_json services = ordered_json::array();
    for (ServiceKind k : a.required_services) services.push_back(to_string(k));
    j["applications"].push_back({{"name", a.name},
                                 {"services", services},
                                 {"delay_threshold_ms", a.delay_threshold_ms},
                                 {"reliability_pct", a.reliability_pct}});
  }
  j["delay"] = {{"d_com_ms", cfg.delay.d_com_ms},
                {"d_dl_ms", cfg.delay.d_dl_ms},
                {"gamma", cfg.delay.gamma},
                {"density_log_base", cfg.delay.density_log_base},
                {"nc_reference", cfg.delay.nc_reference}};
  j["latency_model"] = {
      {"processing_ms",
       {cfg.latency_model.processing_min_ms, cfg.latency_model.processing_max_ms}},
      {"transmission_ms",
       {cfg.latency_model.transmission_min_ms, cfg.latency_model.transmission_max_ms}},
      {"seed", cfg.latency_model.seed}};
  j["mobility"] = {{"max_speed_mps", cfg.mobility.max_speed_mps},
                   {"max_accel_mps2", cfg.mobility.max_accel_mps2},
                   {"max_decel_mps2", cfg.mobility.max_decel_mps2},
                   {"min_gap_m", cfg.mobility.min_gap_m},
                   {"highway_length_m", cfg.mobility.highway_length_m},
                   {"lane_count", cfg.mobility.lane_count},
                   {"time_step_s", cfg.mobility.time_step_s}};
  j["scenarios"] = ordered_json::array();
  for (const auto& s : cfg.scenarios)
    j["scenarios"].push_back({{"name", s.name},
                              {"arrival_rate_vph", s.arrival_rate_vph},
                              {"duration_s", s.duration_s},
                              {"snapshot_interval_s", s.snapshot_interval_s},
                              {"runs", s.runs},
                              {"seed", s.seed}});
  j["solver"] = {{"name", cfg.solver.name},
                 {"node_budget", cfg.solver.node_budget},
                 {"enumeration_cap", cfg.solver.enumeration_cap}};
  j["histogram_bins"] = cfg.histogram_bins;
  return j.dump(2) + "\n";
}

void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path.string());
  out << render_config_json(cfg);
}

PlacementInstance build_instance(const ExperimentConfig& cfg) {
  if (cfg.topology.server_count < 1) throw ConfigError("topology: need at least one server");
  PlacementInstance inst;
  inst.services = cfg.services;
  inst.applications = cfg.applications;
  inst.params = cfg.delay;
  inst.servers.reserve(cfg.topology.server_count);
  for (int i = 0; i < cfg.topology.server_count; ++i) {
    EdgeServer s;
    s.id = i;
    s.position_m = (i + 0.5) * cfg.topology.spacing_m;
    s.capacity = cfg.topology.capacity;
    s.ldm_demand = cfg.topology.ldm_demand;
    s.migration_reserve = cfg.topology.migration_reserve;
    inst.servers.push_back(s);
  }
  double expected_proc =
      0.5 * (cfg.latency_model.processing_min_ms + cfg.latency_model.processing_max_ms);
  double expected_trans =
      0.5 * (cfg.latency_model.transmission_min_ms + cfg.latency_model.transmission_max_ms);
  inst.latency = LatencyMatrix::uniform_expected(cfg.topology.server_count,
                                                 expected_proc, expected_trans);
  inst.evaluation_positions.reserve(cfg.topology.server_count);
  for (int i = 0; i < cfg.topology.server_count; ++i)
    inst.evaluation_positions.push_back((i + 0.5) * cfg.topology.spacing_m);
  try {
    inst.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return inst;
}

const TrafficScenario* find_scenario(const ExperimentConfig& cfg,
                                     const std::string& name) {
  for (const auto& s : cfg.scenarios)
    if (s.name == name) return &s;
  return nullptr;
}

}  // namespace v2xplace
