// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "v2xplace/rng.hpp"
#include "v2xplace/solver.hpp"

using namespace v2xplace;

namespace {

// Random well-formed instance: default capacities (every service fits every
// server), random cost matrix, default application catalog with randomized
// thresholds so that some instances are delay-infeasible.
PlacementInstance random_instance(SplitMix64& rng, int n) {
  PlacementInstance inst = make_uniform_instance(n, 400.0);
  std::vector<double> entries(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    double diag = rng.uniform(2.0, 6.0);
    for (int j = 0; j < n; ++j)
      entries[static_cast<size_t>(i) * n + j] =
          i == j ? diag : diag + rng.uniform(0.1, 6.0);
  }
  inst.latency = LatencyMatrix(n, entries);
  return inst;
}

std::vector<double> random_thresholds(SplitMix64& rng, size_t apps) {
  std::vector<double> th(apps);
  for (double& t : th) t = rng.uniform(4.0, 16.0);
  return th;
}

}  // namespace

TEST_CASE("objective sums per-zone application delays") {
  PlacementInstance inst = make_uniform_instance(2, 400.0);
  inst.applications = {{"ES", {ServiceKind::DEN}, 10.0, 95.0}};
  Placement p({ServiceKind::CA, ServiceKind::DEN});
  // Zone 0 reaches DEN remotely (1 + 7 + 1), zone 1 locally (1 + 4 + 1).
  CHECK(objective(p, inst) == 15.0);

  // Service hosted everywhere: the min collapses to the local server.
  PlacementInstance inst3 = make_uniform_instance(3, 400.0);
  inst3.applications = {{"PL", {ServiceKind::CA}, 50.0, 90.0}};
  Placement all_ca({ServiceKind::CA, ServiceKind::CA, ServiceKind::CA});
  CHECK(objective(all_ca, inst3) == 3 * 6.0);

  // Uniform costs: permuting servers that host the same kinds changes nothing.
  PlacementInstance inst4 = make_uniform_instance(4, 400.0);
  Placement a({ServiceKind::CA, ServiceKind::DEN, ServiceKind::Media, ServiceKind::DEN});
  Placement b({ServiceKind::DEN, ServiceKind::CA, ServiceKind::Media, ServiceKind::DEN});
  CHECK(objective(a, inst4) == objective(b, inst4));
}

TEST_CASE("exact solver on a two-server instance") {
  PlacementInstance inst = make_uniform_instance(2, 400.0);
  inst.applications = {{"PSW", {ServiceKind::CA, ServiceKind::DEN}, 20.0, 95.0}};

  // Only {CA, DEN} and {DEN, CA} cover both kinds; with uniform costs they
  // tie and the lexicographically smaller assignment wins.
  SolveResult result = solve_exact(inst);
  REQUIRE(result.feasible());
  CHECK(result.placement->at(0) == ServiceKind::CA);
  CHECK(result.placement->at(1) == ServiceKind::DEN);
  // Both zones ride the remote branch: 2 * (1 + 7 + 1).
  CHECK(result.objective_ms == 18.0);

  SolveResult oracle = brute_force_oracle(inst);
  CHECK(oracle.objective_ms == result.objective_ms);
  CHECK(*oracle.placement == *result.placement);
  CHECK(oracle.nodes_explored == 9);
}

TEST_CASE("unbounded thresholds never make the exact solver infeasible") {
  SplitMix64 rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    PlacementInstance inst = random_instance(rng, 2 + trial % 4);
    std::vector<double> inf_th(inst.applications.size(),
                               std::numeric_limits<double>::infinity());
    SolveResult result = solve_exact(inst, inf_th);
    CHECK(result.feasible());
  }
}

TEST_CASE("exact matches oracle on the default instance") {
  PlacementInstance inst = make_default_instance();
  SolveResult exact = solve_exact(inst);
  SolveResult oracle = brute_force_oracle(inst);  // 3^10 = 59049 assignments
  REQUIRE(exact.feasible());
  REQUIRE(oracle.feasible());
  CHECK(exact.objective_ms == oracle.objective_ms);
  CHECK(*exact.placement == *oracle.placement);
  CHECK(oracle.nodes_explored == 59049);
  CHECK(exact.nodes_explored < oracle.nodes_explored);
  // One Media replica, the rest split across CA and DEN.
  int media = 0;
  for (int n = 0; n < 10; ++n)
    if (exact.placement->at(n) == ServiceKind::Media) ++media;
  CHECK(media == 1);
}

TEST_CASE("randomized differential: exact vs oracle") {
  SplitMix64 rng(77);
  int feasible_count = 0, infeasible_count = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + static_cast<int>(rng.next_u64() % 4);  // 2..5
    PlacementInstance inst = random_instance(rng, n);
    auto th = random_thresholds(rng, inst.applications.size());
    SolveResult exact = solve_exact(inst, th);
    SolveResult oracle = brute_force_oracle(inst, th);
    CHECK(exact.feasible() == oracle.feasible());
    if (exact.feasible()) {
      ++feasible_count;
      CHECK(exact.objective_ms == oracle.objective_ms);  // bitwise
      CHECK(*exact.placement == *oracle.placement);
      // Returned placements satisfy the enforced constraints.
      CHECK(check_constraints(*exact.placement, inst, th).ok());
    } else {
      ++infeasible_count;
    }
  }
  // The threshold range is chosen so both branches actually occur.
  CHECK(feasible_count > 0);
  CHECK(infeasible_count > 0);
}

TEST_CASE("rdp relaxes thresholds by the reliability factor") {
  SUBCASE("feasible first pass: identical to exact") {
    PlacementInstance inst = make_default_instance();
    SolveResult rdp = solve_rdp(inst);
    SolveResult exact = solve_exact(inst);
    REQUIRE(rdp.feasible());
    CHECK_FALSE(rdp.relaxed);
    CHECK(rdp.tag == SolverTag::RDP);
    CHECK(rdp.objective_ms == exact.objective_ms);
    CHECK(*rdp.placement == *exact.placement);
    CHECK(rdp.enforced_thresholds_ms == inst.thresholds());
  }

  SUBCASE("relaxed second pass") {
    PlacementInstance inst = make_default_instance();
    // Expected transmission 4.5 ms: FCW hits 10.5 ms in every zone, above its
    // 10 ms threshold, so the strict pass fails. 10 / 0.95 = 10.526... passes.
    inst.latency = LatencyMatrix::uniform_expected(10, 4.0, 4.5);
    SolveResult strict = solve_exact(inst);
    REQUIRE_FALSE(strict.feasible());

    SolveResult rdp = solve_rdp(inst);
    REQUIRE(rdp.feasible());
    CHECK(rdp.relaxed);
    for (size_t a = 0; a < inst.applications.size(); ++a) {
      double expected = inst.applications[a].delay_threshold_ms /
                        (inst.applications[a].reliability_pct / 100.0);
      CHECK(rdp.enforced_thresholds_ms[a] == expected);
      CHECK(rdp.enforced_thresholds_ms[a] >= inst.applications[a].delay_threshold_ms);
    }
    // ES: 10 / 0.95.
    CHECK(rdp.enforced_thresholds_ms[2] == doctest::Approx(10.526315789473685));
    CHECK(check_constraints(*rdp.placement, inst, rdp.enforced_thresholds_ms).ok());
  }

  SUBCASE("infeasible under both passes") {
    PlacementInstance inst = make_uniform_instance(3, 400.0);
    for (auto& app : inst.applications) app.delay_threshold_ms = 0.5;
    SolveResult rdp = solve_rdp(inst);
    CHECK_FALSE(rdp.feasible());
    CHECK(rdp.tag == SolverTag::RDP);
    CHECK(rdp.relaxed);
  }
}

TEST_CASE("raa maximizes utilization under coverage") {
  SUBCASE("three servers: one CA, one DEN, Media on the rest") {
    PlacementInstance inst = make_uniform_instance(3, 400.0);
    SolveResult raa = solve_raa(inst);
    REQUIRE(raa.feasible());
    CHECK(raa.placement->at(0) == ServiceKind::CA);
    CHECK(raa.placement->at(1) == ServiceKind::DEN);
    CHECK(raa.placement->at(2) == ServiceKind::Media);
  }

  SUBCASE("default topology is Media-heavy") {
    PlacementInstance inst = make_default_instance();
    SolveResult raa = solve_raa(inst);
    REQUIRE(raa.feasible());
    int media = 0;
    for (int n = 0; n < 10; ++n)
      if (raa.placement->at(n) == ServiceKind::Media) ++media;
    CHECK(media == 8);
    // Media fills its server exactly: utilization 1 per Media server.
    CHECK(resource_utilization(*raa.placement, inst) == doctest::Approx(9.0));
  }

  SUBCASE("single server, single CA application") {
    PlacementInstance inst = make_uniform_instance(1, 400.0);
    inst.applications = {{"PL", {ServiceKind::CA}, 50.0, 90.0}};
    SolveResult raa = solve_raa(inst);
    REQUIRE(raa.feasible());
    CHECK(raa.placement->at(0) == ServiceKind::CA);
  }

  SUBCASE("never beats exact on the delay objective, and exact never beats "
          "raa on utilization") {
    SplitMix64 rng(5150);
    for (int trial = 0; trial < 30; ++trial) {
      PlacementInstance inst = random_instance(rng, 2 + trial % 4);
      SolveResult raa = solve_raa(inst);
      std::vector<double> inf_th(inst.applications.size(),
                                 std::numeric_limits<double>::infinity());
      SolveResult exact = solve_exact(inst, inf_th);
      REQUIRE(raa.feasible());
      REQUIRE(exact.feasible());
      CHECK(raa.objective_ms >= exact.objective_ms);
      CHECK(resource_utilization(*raa.placement, inst) >=
            resource_utilization(*exact.placement, inst));
    }
  }
}

TEST_CASE("oracle edge cases") {
  SUBCASE("empty application list: everything is feasible, objective 0") {
    PlacementInstance inst = make_uniform_instance(2, 400.0);
    inst.applications.clear();
    std::vector<double> no_thresholds;
    SolveResult oracle = brute_force_oracle(inst, no_thresholds);
    REQUIRE(oracle.feasible());
    CHECK(oracle.objective_ms == 0.0);
    CHECK(oracle.placement->at(0) == ServiceKind::CA);
    CHECK(oracle.placement->at(1) == ServiceKind::CA);
  }

  SUBCASE("enumeration cap") {
    PlacementInstance inst = make_uniform_instance(6, 400.0);
    SolveOptions opts;
    opts.enumeration_cap = 100;  // 3^6 = 729 > 100
    CHECK_THROWS_AS(brute_force_oracle(inst, inst.thresholds(), opts),
                    EnumerationCapExceeded);
  }

  SUBCASE("node budget guard") {
    PlacementInstance inst = make_default_instance();
    SolveOptions opts;
    opts.node_budget = 10;
    CHECK_THROWS_AS(solve_exact(inst, opts), SearchBudgetExceeded);
  }
}

TEST_CASE("solver runs are deterministic") {
  PlacementInstance inst = make_default_instance();
  for (SolverTag tag : {SolverTag::Exact, SolverTag::RDP, SolverTag::RAA,
                        SolverTag::Oracle}) {
    SolveResult a = solve_with(tag, inst);
    SolveResult b = solve_with(tag, inst);
    CHECK(a.feasible() == b.feasible());
    CHECK(a.objective_ms == b.objective_ms);
    CHECK(a.nodes_explored == b.nodes_explored);
    if (a.feasible()) CHECK(*a.placement == *b.placement);
  }
}
