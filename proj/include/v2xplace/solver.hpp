// SPDX-License-Identifier: Apache-2.0
//
// Placement solvers: the exact minimizer of the summed application delay,
// the reliability-relaxation heuristic (RDP), the utilization-maximizing
// baseline (RAA), and an exhaustive oracle for differential testing.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "v2xplace/instance.hpp"

namespace v2xplace {

enum class SolverTag { Exact, RDP, RAA, Oracle };

const char* solver_name(SolverTag tag);
SolverTag parse_solver_tag(std::string_view name);

struct SolveOptions {
  std::uint64_t node_budget = 10'000'000;  // branch-and-bound size guard
  double enumeration_cap = 1e7;            // oracle refuses |U|^|N| above this
};

class SearchBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EnumerationCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Infeasibility is a value (empty placement), not an error.
struct SolveResult {
  std::optional<Placement> placement;
  double objective_ms = std::numeric_limits<double>::infinity();
  SolverTag tag = SolverTag::Exact;
  std::vector<double> enforced_thresholds_ms;  // per application
  bool relaxed = false;
  std::uint64_t nodes_explored = 0;

  bool feasible() const { return placement.has_value(); }
};

// Summed application delay over all reference vehicles (one per zone).
double objective(const Placement& placement, const PlacementInstance& instance);

// Mean of per-component demand/capacity ratios, summed over servers. This is
// the quantity RAA maximizes.
double resource_utilization(const Placement& placement,
                            const PlacementInstance& instance);

// Global minimizer of the summed delay subject to per-application delay
// thresholds, per-server capacity, one-service-per-server and coverage.
// Branch-and-bound over the |U|^|N| assignment space; ties resolve to the
// lexicographically smallest assignment, matching the oracle.
SolveResult solve_exact(const PlacementInstance& instance,
                        std::span<const double> thresholds,
                        const SolveOptions& opts = {});
SolveResult solve_exact(const PlacementInstance& instance,
                        const SolveOptions& opts = {});

// Exact solve under catalog thresholds; on infeasibility, retries once with
// each threshold relaxed to threshold / (reliability / 100).
SolveResult solve_rdp(const PlacementInstance& instance,
                      const SolveOptions& opts = {});

// Utilization-maximizing baseline: ignores delay thresholds entirely and
// fills servers subject to capacity and coverage only.
SolveResult solve_raa(const PlacementInstance& instance,
                      const SolveOptions& opts = {});

// Exhaustive enumeration; the reference answer for solver tests.
SolveResult brute_force_oracle(const PlacementInstance& instance,
                               std::span<const double> thresholds,
                               const SolveOptions& opts = {});
SolveResult brute_force_oracle(const PlacementInstance& instance,
                               const SolveOptions& opts = {});

SolveResult solve_with(SolverTag tag, const PlacementInstance& instance,
                       const SolveOptions& opts = {});

}  // namespace v2xplace
