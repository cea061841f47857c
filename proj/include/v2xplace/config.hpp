// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: one JSON file carrying topology, catalogs, delay
// parameters, traffic scenarios and solver selection. Every field has a
// default reproducing the built-in protocol, so an empty file is a complete
// configuration.
#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "v2xplace/instance.hpp"
#include "v2xplace/mobility.hpp"
#include "v2xplace/simulation.hpp"

namespace v2xplace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TopologyConfig {
  int server_count = 10;
  double spacing_m = 400.0;
  ResourceVector capacity{8.0, 8.0};
  ResourceVector ldm_demand{4.0, 2.0};
  ResourceVector migration_reserve{0.0, 0.0};
};

struct SolverConfig {
  std::string name = "rdp";
  std::uint64_t node_budget = 10'000'000;
  double enumeration_cap = 1e7;
};

struct ExperimentConfig {
  std::uint64_t seed = 42;
  TopologyConfig topology;
  std::vector<ServiceSpec> services;
  std::vector<ApplicationSpec> applications;
  DelayParameters delay;
  StochasticLatencyModel latency_model;
  MobilityParams mobility;
  std::vector<TrafficScenario> scenarios;
  SolverConfig solver;
  int histogram_bins = 50;
};

// Defaults: built-in catalogs, 10 servers every 400 m, 1 ms uplink/downlink,
// scenarios "moderate" (1500 veh/h) and "heavy" (1800 veh/h) at 1500 s with
// 10 s snapshots and 5 runs each.
ExperimentConfig default_config();

// Re-derives the scenario and latency-model seeds from a new global seed.
void reseed(ExperimentConfig& cfg, std::uint64_t seed);

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string render_config_json(const ExperimentConfig& cfg);
void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

// Expected-value cost matrix (midpoints of the stochastic ranges), servers at
// zone centers, one evaluation position per zone.
PlacementInstance build_instance(const ExperimentConfig& cfg);

const TrafficScenario* find_scenario(const ExperimentConfig& cfg,
                                     const std::string& name);

}  // namespace v2xplace
