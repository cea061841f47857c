// SPDX-License-Identifier: Apache-2.0

#include "v2xplace/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace v2xplace {

namespace {

double objective_over_zones(const Placement& placement, const PlacementInstance& inst,
                            std::span<const int> zones) {
  double total = 0.0;
  for (int zone : zones)
    for (const auto& app : inst.applications)
      total += application_delay(placement, inst.latency, zone, app, inst.params);
  return total;
}

double server_utilization(const PlacementInstance& inst, int server, ServiceKind u) {
  const ResourceVector& d = inst.demand_of(u);
  ResourceVector eff = inst.servers[server].effective_capacity();
  double cores = d.cores == 0.0 ? 0.0 : d.cores / eff.cores;
  double ram = d.ram_gb == 0.0 ? 0.0 : d.ram_gb / eff.ram_gb;
  return 0.5 * (cores + ram);
}

// Shared search state. Assignments are explored in lexicographic order
// (server 0 outermost, CA < DEN < Media), and the incumbent is replaced only
// on strict improvement, so the first optimum found is the lexicographically
// smallest one -- the same tie-break the oracle produces.
struct Search {
  const PlacementInstance& inst;
  std::span<const double> thresholds;
  const SolveOptions& opts;
  int n;
  std::vector<int> zones;
  // can_host[u][j]: demand of u fits the effective capacity of server j.
  std::array<std::vector<char>, kServiceKindCount> can_host;
  // required[u]: some application needs u.
  std::array<bool, kServiceKindCount> required{};

  std::vector<ServiceKind> assignment;
  std::uint64_t nodes = 0;

  double best_value;
  bool maximize;
  std::optional<Placement> best_placement;

  Search(const PlacementInstance& instance, std::span<const double> th,
         const SolveOptions& options, bool maximize_utilization)
      : inst(instance),
        thresholds(th),
        opts(options),
        n(static_cast<int>(instance.servers.size())),
        zones(instance.evaluation_zones()),
        assignment(static_cast<size_t>(n), ServiceKind::CA),
        maximize(maximize_utilization) {
    best_value = maximize ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
    for (ServiceKind u : kAllServiceKinds) {
      can_host[index_of(u)].resize(n);
      for (int j = 0; j < n; ++j)
        can_host[index_of(u)][j] =
            inst.demand_of(u).fits_within(inst.servers[j].effective_capacity());
    }
    for (const auto& app : inst.applications)
      for (ServiceKind u : app.required_services) required[index_of(u)] = true;
  }

  void count_node() {
    if (++nodes > opts.node_budget)
      throw SearchBudgetExceeded("node budget exceeded after " +
                                 std::to_string(opts.node_budget) + " nodes");
  }

  // Optimistic per-(zone, kind) service delay for the partial assignment:
  // servers below `depth` count only if assigned the kind, servers at or
  // above count whenever they could still host it. Returns false when some
  // required kind has no remaining candidate host.
  bool optimistic_service_mins(int depth,
                               std::array<std::vector<double>, kServiceKindCount>& mins) {
    for (ServiceKind u : kAllServiceKinds) {
      int ui = index_of(u);
      mins[ui].assign(zones.size(), std::numeric_limits<double>::infinity());
      bool any = false;
      for (int j = 0; j < n; ++j) {
        bool candidate = j < depth ? assignment[j] == u
                                   : static_cast<bool>(can_host[ui][j]);
        if (!candidate) continue;
        any = true;
        for (size_t z = 0; z < zones.size(); ++z)
          mins[ui][z] = std::min(mins[ui][z],
                                 inst.params.gamma * inst.latency.at(zones[z], j));
      }
      if (required[ui] && !any) return false;
    }
    return true;
  }

  // Lower bound on the delay objective over all completions of the partial
  // assignment. Mirrors objective_over_zones term by term (same products,
  // same min/max/sum order), so the bound never exceeds the objective of any
  // completion under floating-point arithmetic. Returns false on a provably
  // infeasible subtree (coverage or a delay threshold).
  bool delay_bound(int depth, double& lb) {
    int missing = 0;
    for (ServiceKind u : kAllServiceKinds) {
      if (!required[index_of(u)]) continue;
      bool placed = false;
      for (int j = 0; j < depth; ++j)
        if (assignment[j] == u) { placed = true; break; }
      if (!placed) ++missing;
    }
    if (missing > n - depth) return false;

    std::array<std::vector<double>, kServiceKindCount> mins;
    if (!optimistic_service_mins(depth, mins)) return false;

    lb = 0.0;
    for (size_t z = 0; z < zones.size(); ++z) {
      for (size_t a = 0; a < inst.applications.size(); ++a) {
        const ApplicationSpec& app = inst.applications[a];
        double worst = 0.0;
        for (ServiceKind u : app.required_services)
          worst = std::max(worst, mins[index_of(u)][z]);
        double term =
            compose_application_delay(inst.params.d_com_ms, worst, inst.params.d_dl_ms);
        if (term > thresholds[a]) return false;
        lb += term;
      }
    }
    return true;
  }

  void accept_leaf() {
    Placement candidate(assignment);
    double value = maximize ? resource_utilization(candidate, inst)
                            : objective_over_zones(candidate, inst, zones);
    bool improves = maximize ? value > best_value : value < best_value;
    if (improves) {
      best_value = value;
      best_placement = candidate;
    }
  }

  void descend_delay(int depth) {
    count_node();
    double lb = 0.0;
    if (!delay_bound(depth, lb)) return;
    if (best_placement && lb >= best_value) return;
    if (depth == n) {
      accept_leaf();
      return;
    }
    for (ServiceKind u : kAllServiceKinds) {
      if (!can_host[index_of(u)][depth]) continue;
      assignment[depth] = u;
      descend_delay(depth + 1);
    }
  }

  // Upper bound for the utilization search: assigned servers contribute their
  // chosen service, open servers their best feasible one. Summed in server
  // order like resource_utilization, so it dominates every completion.
  bool utilization_bound(int depth, double& ub) {
    int missing = 0;
    for (ServiceKind u : kAllServiceKinds) {
      int ui = index_of(u);
      if (!required[ui]) continue;
      bool placed = false;
      bool possible = false;
      for (int j = 0; j < n; ++j) {
        bool candidate = j < depth ? assignment[j] == u
                                   : static_cast<bool>(can_host[ui][j]);
        if (!candidate) continue;
        possible = true;
        if (j < depth) { placed = true; break; }
      }
      if (!possible) return false;
      if (!placed) ++missing;
    }
    if (missing > n - depth) return false;

    ub = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j < depth) {
        ub += server_utilization(inst, j, assignment[j]);
      } else {
        double bestu = -std::numeric_limits<double>::infinity();
        for (ServiceKind u : kAllServiceKinds)
          if (can_host[index_of(u)][j])
            bestu = std::max(bestu, server_utilization(inst, j, u));
        if (bestu == -std::numeric_limits<double>::infinity()) return false;
        ub += bestu;
      }
    }
    return true;
  }

  void descend_utilization(int depth) {
    count_node();
    double ub = 0.0;
    if (!utilization_bound(depth, ub)) return;
    if (best_placement && ub <= best_value) return;
    if (depth == n) {
      accept_leaf();
      return;
    }
    for (ServiceKind u : kAllServiceKinds) {
      if (!can_host[index_of(u)][depth]) continue;
      assignment[depth] = u;
      descend_utilization(depth + 1);
    }
  }
};

SolveResult finish(Search& search, SolverTag tag, std::span<const double> thresholds) {
  SolveResult result;
  result.tag = tag;
  result.enforced_thresholds_ms.assign(thresholds.begin(), thresholds.end());
  result.nodes_explored = search.nodes;
  if (search.best_placement) {
    result.placement = std::move(search.best_placement);
    result.objective_ms = objective(*result.placement, search.inst);
  }
  return result;
}

}  // namespace

const char* solver_name(SolverTag tag) {
  switch (tag) {
    case SolverTag::Exact:
      return "exact";
    case SolverTag::RDP:
      return "rdp";
    case SolverTag::RAA:
      return "raa";
    case SolverTag::Oracle:
      return "oracle";
  }
  return "?";
}

SolverTag parse_solver_tag(std::string_view name) {
  if (name == "exact") return SolverTag::Exact;
  if (name == "rdp") return SolverTag::RDP;
  if (name == "raa") return SolverTag::RAA;
  if (name == "oracle") return SolverTag::Oracle;
  throw std::invalid_argument("unknown solver: " + std::string(name));
}

double objective(const Placement& placement, const PlacementInstance& instance) {
  auto zones = instance.evaluation_zones();
  return objective_over_zones(placement, instance, zones);
}

double resource_utilization(const Placement& placement,
                            const PlacementInstance& instance) {
  double total = 0.0;
  for (int j = 0; j < placement.server_count(); ++j)
    total += server_utilization(instance, j, placement.at(j));
  return total;
}

SolveResult solve_exact(const PlacementInstance& instance,
                        std::span<const double> thresholds,
                        const SolveOptions& opts) {
  instance.validate();
  if (thresholds.size() != instance.applications.size())
    throw std::invalid_argument("threshold count does not match applications");
  Search search(instance, thresholds, opts, /*maximize_utilization=*/false);
  search.descend_delay(0);
  return finish(search, SolverTag::Exact, thresholds);
}

SolveResult solve_exact(const PlacementInstance& instance, const SolveOptions& opts) {
  auto th = instance.thresholds();
  return solve_exact(instance, th, opts);
}

SolveResult solve_rdp(const PlacementInstance& instance, const SolveOptions& opts) {
  auto original = instance.thresholds();
  SolveResult first = solve_exact(instance, original, opts);
  first.tag = SolverTag::RDP;
  if (first.feasible()) return first;

  std::vector<double> relaxed(original.size());
  for (size_t a = 0; a < original.size(); ++a)
    relaxed[a] = original[a] / (instance.applications[a].reliability_pct / 100.0);
  SolveResult second = solve_exact(instance, relaxed, opts);
  second.tag = SolverTag::RDP;
  second.relaxed = true;
  second.nodes_explored += first.nodes_explored;
  return second;
}

SolveResult solve_raa(const PlacementInstance& instance, const SolveOptions& opts) {
  instance.validate();
  // Delay thresholds play no role; keep the originals for reporting.
  auto th = instance.thresholds();
  std::vector<double> unbounded(th.size(), std::numeric_limits<double>::infinity());
  Search search(instance, unbounded, opts, /*maximize_utilization=*/true);
  search.descend_utilization(0);
  SolveResult result = finish(search, SolverTag::RAA, th);
  return result;
}

SolveResult brute_force_oracle(const PlacementInstance& instance,
                               std::span<const double> thresholds,
                               const SolveOptions& opts) {
  instance.validate();
  if (thresholds.size() != instance.applications.size())
    throw std::invalid_argument("threshold count does not match applications");
  int n = static_cast<int>(instance.servers.size());
  double space = std::pow(static_cast<double>(kServiceKindCount), n);
  if (space > opts.enumeration_cap)
    throw EnumerationCapExceeded("assignment space " + std::to_string(space) +
                                 " exceeds oracle cap");

  auto zones = instance.evaluation_zones();
  SolveResult result;
  result.tag = SolverTag::Oracle;
  result.enforced_thresholds_ms.assign(thresholds.begin(), thresholds.end());

  std::vector<ServiceKind> assignment(static_cast<size_t>(n), ServiceKind::CA);
  bool done = false;
  while (!done) {
    ++result.nodes_explored;
    Placement candidate(assignment);
    ConstraintReport report = check_constraints(candidate, instance, thresholds);
    if (report.ok()) {
      double value = objective_over_zones(candidate, instance, zones);
      if (value < result.objective_ms) {
        result.objective_ms = value;
        result.placement = candidate;
      }
    }
    // Odometer increment, last server fastest: lexicographic enumeration.
    int pos = n - 1;
    while (pos >= 0) {
      int next = index_of(assignment[pos]) + 1;
      if (next < kServiceKindCount) {
        assignment[pos] = static_cast<ServiceKind>(next);
        break;
      }
      assignment[pos] = ServiceKind::CA;
      --pos;
    }
    done = pos < 0;
  }
  if (!result.placement)
    result.objective_ms = std::numeric_limits<double>::infinity();
  return result;
}

SolveResult brute_force_oracle(const PlacementInstance& instance,
                               const SolveOptions& opts) {
  auto th = instance.thresholds();
  return brute_force_oracle(instance, th, opts);
}

SolveResult solve_with(SolverTag tag, const PlacementInstance& instance,
                       const SolveOptions& opts) {
  switch (tag) {
    case SolverTag::Exact:
      return solve_exact(instance, opts);
    case SolverTag::RDP:
      return solve_rdp(instance, opts);
    case SolverTag::RAA:
      return solve_raa(instance, opts);
    case SolverTag::Oracle:
      return brute_force_oracle(instance, opts);
  }
  throw std::invalid_argument("unknown solver tag");
}

}  // namespace v2xplace
