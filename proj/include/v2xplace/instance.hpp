// SPDX-License-Identifier: Apache-2.0
//
// The full input to a placement problem: topology, catalogs, cost matrix and
// delay parameters, plus the constraint report evaluated against it.
#pragma once

#include <span>
#include <vector>

#include "v2xplace/model.hpp"

namespace v2xplace {

struct PlacementInstance {
  std::vector<EdgeServer> servers;
  std::vector<ServiceSpec> services;  // indexed by ServiceKind
  std::vector<ApplicationSpec> applications;
  LatencyMatrix latency;  // placement-time expected costs
  DelayParameters params;
  // One reference vehicle per coverage zone; delay constraints and the
  // objective are evaluated at these positions.
  std::vector<double> evaluation_positions;

  double zone_width() const;
  int zone_of(double position_m) const;
  const ResourceVector& demand_of(ServiceKind k) const;
  std::vector<double> thresholds() const;       // from the application catalog
  std::vector<int> evaluation_zones() const;    // serving server per reference vehicle

  void validate() const;
};

// The default setup: 10 servers every 400 m on a 4 km highway, built-in
// service and application catalogs, expected processing 4 ms and
// transmission 3 ms, 1 ms uplink and downlink.
PlacementInstance make_default_instance();

// Same topology/catalog layout with a custom size (testing helper).
PlacementInstance make_uniform_instance(int server_count, double spacing_m);

struct CapacityViolation {
  int server = 0;
  ServiceKind service = ServiceKind::CA;
  ResourceVector demand;
  ResourceVector available;
};

struct DelayViolation {
  int zone = 0;
  std::string app;
  double delay_ms = 0.0;
  double threshold_ms = 0.0;
};

struct ConstraintReport {
  bool one_service_per_server = true;  // structural in Placement
  std::vector<ServiceKind> missing_services;
  std::vector<CapacityViolation> capacity_violations;
  std::vector<DelayViolation> delay_violations;

  bool coverage_ok() const { return missing_services.empty(); }
  bool capacity_ok() const { return capacity_violations.empty(); }
  bool delay_ok() const { return delay_violations.empty(); }
  bool ok() const {
    return one_service_per_server && coverage_ok() && capacity_ok() && delay_ok();
  }
};

// Checks coverage, per-server capacity and the per-zone delay thresholds.
// Violations are collected, not thrown; delay checks are skipped for
// applications whose required services are uncovered.
ConstraintReport check_constraints(const Placement& placement,
                                   const PlacementInstance& instance);
ConstraintReport check_constraints(const Placement& placement,
                                   const PlacementInstance& instance,
                                   std::span<const double> thresholds);

}  // namespace v2xplace
