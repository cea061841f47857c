// SPDX-License-Identifier: Apache-2.0
//
// Highway traffic generator: Poisson arrivals, a gap-keeping car-following
// rule bounded by the configured kinematics, and per-snapshot annotation of
// vehicles with their serving server and neighbor count.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "v2xplace/model.hpp"

namespace v2xplace {

struct MobilityParams {
  double max_speed_mps = 27.7;
  double max_accel_mps2 = 2.6;
  double max_decel_mps2 = 4.5;
  double min_gap_m = 2.5;
  double highway_length_m = 4000.0;
  int lane_count = 2;
  double time_step_s = 0.5;

  void validate() const;
};

struct TrafficScenario {
  std::string name = "default";
  double arrival_rate_vph = 1500.0;
  double duration_s = 1500.0;
  double snapshot_interval_s = 10.0;
  std::uint64_t seed = 42;
  int runs = 5;

  void validate() const;
};

struct VehicleState {
  int id = 0;
  double position_m = 0.0;
  double speed_mps = 0.0;
  int lane = 0;
};

struct Arrival {
  double time_s = 0.0;
  int lane = 0;
};

struct VehicleSnapshot {
  int vehicle = 0;
  double position_m = 0.0;
  int serving_server = 0;
  int nc = 0;  // other vehicles sharing the coverage zone
  double timestamp_s = 0.0;
};

// Poisson arrival times on [0, duration], lanes assigned round-robin.
// Deterministic for a given seed.
std::vector<Arrival> generate_arrivals(const TrafficScenario& scenario,
                                       int lane_count, std::uint64_t seed);
std::vector<Arrival> generate_arrivals(const TrafficScenario& scenario,
                                       int lane_count);

// Advances every vehicle by dt: accelerate toward max speed, brake as needed
// to keep at least min_gap behind the same-lane leader, trapezoidal position
// update, vehicles past the end of the highway removed.
std::vector<VehicleState> step(const std::vector<VehicleState>& world, double dt,
                               const MobilityParams& params);

// True when every follower could brake to a stop at max deceleration without
// closing below min_gap even if its leader froze in place. step() preserves
// this property.
bool gap_feasible(const std::vector<VehicleState>& world,
                  const MobilityParams& params);

// Annotates vehicles with serving server (containing coverage zone) and the
// number of other vehicles in that zone. Output is ordered by vehicle id.
std::vector<VehicleSnapshot> snapshot(const std::vector<VehicleState>& world,
                                      double t,
                                      const std::vector<EdgeServer>& servers);

struct TraceSnapshot {
  double timestamp_s = 0.0;
  std::vector<VehicleState> states;
  std::vector<VehicleSnapshot> vehicles;  // aligned with states
};

struct TraceRun {
  std::vector<TraceSnapshot> snapshots;
  int arrival_count = 0;  // scheduled arrivals
  int spawned_count = 0;  // actually entered the road
};

// One full traffic run: arrivals enter at the highway start when the entry
// is clear, the world advances in time_step_s increments, and a snapshot is
// recorded every snapshot_interval_s.
TraceRun simulate_trace(const TrafficScenario& scenario,
                        const MobilityParams& params,
                        const std::vector<EdgeServer>& servers,
                        std::uint64_t seed);

}  // namespace v2xplace
