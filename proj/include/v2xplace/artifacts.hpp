// SPDX-License-Identifier: Apache-2.0
//
// Output artifacts: placement JSON, samples CSV, summary JSON, histogram CSV
// and trajectory CSV. Rendering is byte-deterministic for fixed inputs.
#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "v2xplace/simulation.hpp"

namespace v2xplace {

// Shortest round-trip decimal representation.
std::string format_double(double v);

// Header: run,timestamp,vehicle,app,delay_ms,server,nc
std::string render_samples_csv(std::span<const DelaySample> samples,
                               std::span<const ApplicationSpec> apps);

// Header: bin_left,bin_right,density
std::string render_histogram_csv(const Histogram& hist);

// Header: time,id,position,speed,lane,zone
std::string render_trajectory_csv(const TraceRun& run);

std::string render_summary_json(const SummaryReport& report,
                                const TrafficScenario& scenario,
                                std::uint64_t model_seed);

// Placement artifact: assignments, objective, enforced thresholds and the
// constraint report evaluated under them.
std::string render_placement_json(const SolveResult& result,
                                  const PlacementInstance& instance);

struct LoadedPlacement {
  Placement placement;
  std::string solver;
  bool feasible = false;
};

LoadedPlacement parse_placement_json(const std::string& text);

std::string render_comparison_json(const ComparisonReport& report,
                                   const TrafficScenario& scenario);

std::string render_sweep_json(const SweepReport& report);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace v2xplace
