// SPDX-License-Identifier: Apache-2.0

#include "v2xplace/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "v2xplace/rng.hpp"

namespace v2xplace {

namespace {

// Numerical headroom kept under min_gap so float rounding never produces a
// nominal gap violation.
constexpr double kGapSlack = 1e-6;
// Entry stays blocked until the rearmost vehicle is this far past min_gap.
constexpr double kSpawnHeadroom = 0.5;

// Largest speed v' satisfying v'^2/(2b) + (v + v') dt/2 <= gap_excess: after
// this step the vehicle can still brake to rest behind the leader's current
// position even if the leader never moves again.
double safe_speed(double v, double gap_excess, double dt, double decel) {
  double a = 1.0 / (2.0 * decel);
  double b = 0.5 * dt;
  double c = 0.5 * v * dt - gap_excess;
  double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) return 0.0;
  return std::max(0.0, (-b + std::sqrt(disc)) / (2.0 * a));
}

double zone_width_of(const std::vector<EdgeServer>& servers) {
  if (servers.size() < 2) return std::numeric_limits<double>::infinity();
  return servers[1].position_m - servers[0].position_m;
}

}  // namespace

void MobilityParams::validate() const {
  if (!(max_speed_mps > 0.0 && max_accel_mps2 > 0.0 && max_decel_mps2 > 0.0))
    throw std::invalid_argument("mobility: kinematic limits must be positive");
  if (!(min_gap_m > 0.0)) throw std::invalid_argument("mobility: min_gap must be positive");
  if (!(highway_length_m > 0.0))
    throw std::invalid_argument("mobility: highway length must be positive");
  if (lane_count < 1) throw std::invalid_argument("mobility: need at least one lane");
  if (!(time_step_s > 0.0)) throw std::invalid_argument("mobility: time step must be positive");
}

void TrafficScenario::validate() const {
  if (!(arrival_rate_vph > 0.0))
    throw std::invalid_argument("scenario " + name + ": arrival rate must be positive");
  if (!(duration_s > 0.0))
    throw std::invalid_argument("scenario " + name + ": duration must be positive");
  if (!(snapshot_interval_s > 0.0 && snapshot_interval_s <= duration_s))
    throw std::invalid_argument("scenario " + name + ": bad snapshot interval");
  if (runs < 1) throw std::invalid_argument("scenario " + name + ": runs must be >= 1");
}

std::vector<Arrival> generate_arrivals(const TrafficScenario& scenario,
                                       int lane_count, std::uint64_t seed) {
  scenario.validate();
  if (lane_count < 1) throw std::invalid_argument("lane_count must be >= 1");
  std::vector<Arrival> arrivals;
  SplitMix64 rng(seed);
  double rate_per_s = scenario.arrival_rate_vph / 3600.0;
  double t = rng.exponential(rate_per_s);
  int lane = 0;
  while (t <= scenario.duration_s) {
    arrivals.push_back({t, lane});
    lane = (lane + 1) % lane_count;
    t += rng.exponential(rate_per_s);
  }
  return arrivals;
}

std::vector<Arrival> generate_arrivals(const TrafficScenario& scenario,
                                       int lane_count) {
  return generate_arrivals(scenario, lane_count, scenario.seed);
}

std::vector<VehicleState> step(const std::vector<VehicleState>& world, double dt,
                               const MobilityParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  std::vector<VehicleState> next = world;

  // Per lane, leaders first, so a follower sees its leader's updated position.
  std::vector<int> order(world.size());
  for (size_t i = 0; i < world.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (world[a].lane != world[b].lane) return world[a].lane < world[b].lane;
    if (world[a].position_m != world[b].position_m)
      return world[a].position_m > world[b].position_m;
    return world[a].id < world[b].id;
  });

  int current_lane = -1;
  double leader_new_pos = 0.0;
  bool has_leader = false;
  for (int idx : order) {
    const VehicleState& cur = world[idx];
    if (cur.lane != current_lane) {
      current_lane = cur.lane;
      has_leader = false;
    }
    double v_new = std::min(params.max_speed_mps,
                            cur.speed_mps + params.max_accel_mps2 * dt);
    if (has_leader) {
      double gap_excess =
          leader_new_pos - cur.position_m - params.min_gap_m - kGapSlack;
      v_new = std::min(v_new, safe_speed(cur.speed_mps, gap_excess, dt,
                                         params.max_decel_mps2));
    }
    // Braking is bounded; the safety envelope is preserved exactly at full
    // deceleration, so this clamp cannot create a violation.
    v_new = std::max(v_new, std::max(0.0, cur.speed_mps - params.max_decel_mps2 * dt));
    next[idx].speed_mps = v_new;
    next[idx].position_m = cur.position_m + 0.5 * (cur.speed_mps + v_new) * dt;
    leader_new_pos = next[idx].position_m;
    has_leader = true;
  }

  std::erase_if(next, [&](const VehicleState& v) {
    return v.position_m > params.highway_length_m;
  });
  return next;
}

bool gap_feasible(const std::vector<VehicleState>& world,
                  const MobilityParams& params) {
  std::vector<int> order(world.size());
  for (size_t i = 0; i < world.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (world[a].lane != world[b].lane) return world[a].lane < world[b].lane;
    return world[a].position_m > world[b].position_m;
  });
  int current_lane = -1;
  double leader_pos = 0.0;
  bool has_leader = false;
  for (int idx : order) {
    const VehicleState& cur = world[idx];
    if (cur.lane != current_lane) {
      current_lane = cur.lane;
      has_leader = false;
    }
    if (has_leader) {
      double gap_excess = leader_pos - cur.position_m - params.min_gap_m;
      double envelope =
          cur.speed_mps * cur.speed_mps / (2.0 * params.max_decel_mps2);
      if (gap_excess + 1e-9 < envelope) return false;
    }
    leader_pos = cur.position_m;
    has_leader = true;
  }
  return true;
}

std::vector<VehicleSnapshot> snapshot(const std::vector<VehicleState>& world,
                                      double t,
                                      const std::vector<EdgeServer>& servers) {
  if (servers.empty()) throw std::invalid_argument("snapshot: no servers");
  double width = zone_width_of(servers);
  int n = static_cast<int>(servers.size());

  std::vector<int> zone_of(world.size());
  std::vector<int> zone_count(servers.size(), 0);
  for (size_t i = 0; i < world.size(); ++i) {
    int zone = std::isfinite(width)
                   ? static_cast<int>(std::floor(world[i].position_m / width))
                   : 0;
    zone = std::clamp(zone, 0, n - 1);
    zone_of[i] = zone;
    ++zone_count[zone];
  }

  std::vector<VehicleSnapshot> out;
  out.reserve(world.size());
  for (size_t i = 0; i < world.size(); ++i)
    out.push_back({world[i].id, world[i].position_m, zone_of[i],
                   zone_count[zone_of[i]] - 1, t});
  std::sort(out.begin(), out.end(),
            [](const VehicleSnapshot& a, const VehicleSnapshot& b) {
              return a.vehicle < b.vehicle;
            });
  return out;
}

TraceRun simulate_trace(const TrafficScenario& scenario,
                        const MobilityParams& params,
                        const std::vector<EdgeServer>& servers,
                        std::uint64_t seed) {
  params.validate();
  scenario.validate();
  double steps_per_snapshot_d = scenario.snapshot_interval_s / params.time_step_s;
  int steps_per_snapshot = static_cast<int>(std::lround(steps_per_snapshot_d));
  if (steps_per_snapshot < 1 ||
      std::abs(steps_per_snapshot_d - steps_per_snapshot) > 1e-9)
    throw std::invalid_argument("snapshot interval must be a multiple of the time step");
  int total_steps =
      static_cast<int>(std::lround(scenario.duration_s / params.time_step_s));

  auto arrivals = generate_arrivals(scenario, params.lane_count, seed);

  TraceRun run;
  run.arrival_count = static_cast<int>(arrivals.size());
  std::vector<std::deque<int>> pending(params.lane_count);  // arrival indices
  std::vector<VehicleState> world;
  size_t next_arrival = 0;

  auto try_spawn = [&]() {
    for (int lane = 0; lane < params.lane_count; ++lane) {
      if (pending[lane].empty()) continue;
      double rearmost = std::numeric_limits<double>::infinity();
      for (const VehicleState& v : world)
        if (v.lane == lane) rearmost = std::min(rearmost, v.position_m);
      if (rearmost >= params.min_gap_m + kSpawnHeadroom) {
        int id = pending[lane].front();
        pending[lane].pop_front();
        world.push_back({id, 0.0, 0.0, lane});
        ++run.spawned_count;
      }
    }
  };

  for (int k = 1; k <= total_steps; ++k) {
    world = step(world, params.time_step_s, params);
    double t = k * params.time_step_s;
    while (next_arrival < arrivals.size() && arrivals[next_arrival].time_s <= t) {
      pending[arrivals[next_arrival].lane].push_back(static_cast<int>(next_arrival));
      ++next_arrival;
    }
    try_spawn();
    if (k % steps_per_snapshot == 0) {
      TraceSnapshot snap;
      snap.timestamp_s = t;
      snap.states = world;
      std::sort(snap.states.begin(), snap.states.end(),
                [](const VehicleState& a, const VehicleState& b) { return a.id < b.id; });
      snap.vehicles = snapshot(snap.states, t, servers);
      run.snapshots.push_back(std::move(snap));
    }
  }
  return run;
}

}  // namespace v2xplace
