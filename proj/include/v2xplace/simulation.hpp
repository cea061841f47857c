// SPDX-License-Identifier: Apache-2.0
//
// Traffic-driven delay evaluation: draw per-query processing/transmission
// latencies, assemble per-vehicle per-application delay samples over the
// snapshots of a traffic run, and aggregate means, violation rates and
// delay distributions.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "v2xplace/instance.hpp"
#include "v2xplace/mobility.hpp"
#include "v2xplace/rng.hpp"
#include "v2xplace/solver.hpp"

namespace v2xplace {

struct StochasticLatencyModel {
  double processing_min_ms = 3.0;
  double processing_max_ms = 5.0;
  double transmission_min_ms = 1.0;
  double transmission_max_ms = 5.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct DelaySample {
  int run = 0;
  double timestamp_s = 0.0;
  int vehicle = 0;
  int app = 0;  // index into the application catalog
  double delay_ms = 0.0;
  int serving_server = 0;
  int nc = 0;
};

// Realized cost row for one (vehicle, snapshot): a single LDM processing
// draw (density-adjusted with the vehicle's neighbor count) shared by every
// entry, plus one transmission draw per remote server. Draw order is fixed:
// processing first, then transmissions in ascending server index.
void realize_cost_row(SplitMix64& rng, int serving, int server_count, int nc,
                      const StochasticLatencyModel& model,
                      const DelayParameters& params, std::span<double> row);

// Samples every (snapshot, vehicle, application) triple over all runs of the
// scenario. Draws are shared within a (vehicle, snapshot), so applications
// with identical service sets sample identically; the draw stream depends
// only on (model seed, run, snapshot, vehicle), never on the placement, so
// different placements are compared against paired randomness.
std::vector<DelaySample> run_simulation(const Placement& placement,
                                        const TrafficScenario& scenario,
                                        const StochasticLatencyModel& model,
                                        const PlacementInstance& instance,
                                        const MobilityParams& mobility = {});

struct Histogram {
  std::vector<double> bin_edges;  // bins + 1 entries
  std::vector<double> densities;  // normalized: sum(density * width) == 1
};

Histogram make_histogram(std::span<const double> values, int bins);

struct AppSummary {
  std::string app;
  double threshold_ms = 0.0;
  std::size_t count = 0;
  bool empty = false;  // no samples for this application
  double mean_ms = 0.0;
  double violation_rate = 0.0;  // strictly above threshold
  std::vector<double> per_run_mean_ms;
  double cross_run_mean_ms = 0.0;  // runs weighted equally
  Histogram histogram;
};

struct SummaryReport {
  std::vector<AppSummary> apps;
  std::size_t total_samples = 0;
  int runs = 0;
};

SummaryReport summarize(std::span<const DelaySample> samples,
                        std::span<const ApplicationSpec> apps, int bins = 50);

struct StrategyComparison {
  SolverTag tag = SolverTag::RDP;
  SolveResult solve;
  SummaryReport summary;  // empty when the solve was infeasible
};

struct ComparisonReport {
  std::string scenario;
  std::vector<StrategyComparison> strategies;
};

// Solves with each strategy, then evaluates every feasible placement against
// the same traffic and the same latency-draw streams.
ComparisonReport compare_strategies(std::span<const SolverTag> strategies,
                                    const TrafficScenario& scenario,
                                    const StochasticLatencyModel& model,
                                    const PlacementInstance& instance,
                                    const MobilityParams& mobility = {},
                                    int bins = 50, const SolveOptions& opts = {});

struct AppMeanChange {
  std::string app;
  double mean_before_ms = 0.0;
  double mean_after_ms = 0.0;
  double relative_change = 0.0;  // (after - before) / before
};

struct SweepStep {
  std::string from;
  std::string to;
  std::vector<AppMeanChange> changes;
  std::string max_change_app;  // largest relative increase
};

struct SweepReport {
  SolveResult solve;
  std::vector<std::string> scenario_names;
  std::vector<SummaryReport> summaries;
  std::vector<SweepStep> steps;
};

// One placement evaluated across a list of scenarios; reports the relative
// per-application mean-delay change between consecutive scenarios.
SweepReport density_sweep(std::span<const TrafficScenario> scenarios,
                          const PlacementInstance& instance, SolverTag strategy,
                          const StochasticLatencyModel& model,
                          const MobilityParams& mobility = {}, int bins = 50,
                          const SolveOptions& opts = {});

}  // namespace v2xplace
