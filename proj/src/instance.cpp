// SPDX-License-Identifier: Apache-2.0

#include "v2xplace/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace v2xplace {

double PlacementInstance::zone_width() const {
  if (servers.size() < 2) return std::numeric_limits<double>::infinity();
  return servers[1].position_m - servers[0].position_m;
}

int PlacementInstance::zone_of(double position_m) const {
  double w = zone_width();
  int zone = std::isfinite(w) ? static_cast<int>(std::floor(position_m / w)) : 0;
  return std::clamp(zone, 0, static_cast<int>(servers.size()) - 1);
}

const ResourceVector& PlacementInstance::demand_of(ServiceKind k) const {
  return services[index_of(k)].demand;
}

std::vector<double> PlacementInstance::thresholds() const {
  std::vector<double> th;
  th.reserve(applications.size());
  for (const auto& app : applications) th.push_back(app.delay_threshold_ms);
  return th;
}

std::vector<int> PlacementInstance::evaluation_zones() const {
  std::vector<int> zones;
  zones.reserve(evaluation_positions.size());
  for (double p : evaluation_positions) zones.push_back(zone_of(p));
  return zones;
}

void PlacementInstance::validate() const {
  if (servers.empty()) throw std::invalid_argument("instance: no servers");
  if (services.size() != kServiceKindCount)
    throw std::invalid_argument("instance: service catalog must cover all three kinds");
  for (int k = 0; k < kServiceKindCount; ++k) {
    if (index_of(services[k].kind) != k)
      throw std::invalid_argument("instance: service catalog out of order");
    if (!services[k].demand.nonnegative())
      throw std::invalid_argument("instance: negative service demand");
  }
  if (latency.size() != static_cast<int>(servers.size()))
    throw std::invalid_argument("instance: latency matrix size does not match servers");
  for (const auto& app : applications) app.validate();
  params.validate();
  double w = zone_width();
  for (size_t i = 0; i < servers.size(); ++i) {
    if (servers[i].id != static_cast<int>(i))
      throw std::invalid_argument("instance: server ids must be dense");
    servers[i].effective_capacity();  // throws when over-reserved
    if (i + 1 < servers.size()) {
      double gap = servers[i + 1].position_m - servers[i].position_m;
      if (!(gap > 0.0) || std::abs(gap - w) > 1e-6 * std::max(1.0, w))
        throw std::invalid_argument("instance: server positions must be uniform and increasing");
    }
  }
  if (evaluation_positions.empty())
    throw std::invalid_argument("instance: no evaluation positions");
  // Every kind some application needs must be placeable on at least one server.
  for (ServiceKind k : kAllServiceKinds) {
    bool needed = std::any_of(applications.begin(), applications.end(),
                              [&](const ApplicationSpec& a) { return a.needs(k); });
    if (!needed) continue;
    bool placeable = std::any_of(servers.begin(), servers.end(), [&](const EdgeServer& s) {
      return demand_of(k).fits_within(s.effective_capacity());
    });
    if (!placeable)
      throw std::invalid_argument(std::string("instance: service ") + to_string(k) +
                                  " fits on no server");
  }
}

PlacementInstance make_uniform_instance(int server_count, double spacing_m) {
  PlacementInstance inst;
  inst.services = default_service_catalog();
  inst.applications = default_application_catalog();
  inst.params = DelayParameters{};
  inst.servers.reserve(server_count);
  for (int i = 0; i < server_count; ++i) {
    EdgeServer s;
    s.id = i;
    s.position_m = (i + 0.5) * spacing_m;
    s.capacity = default_server_capacity();
    s.ldm_demand = default_ldm_demand();
    s.migration_reserve = {0.0, 0.0};
    inst.servers.push_back(s);
  }
  inst.latency = LatencyMatrix::uniform_expected(server_count, 4.0, 3.0);
  inst.evaluation_positions.reserve(server_count);
  for (int i = 0; i < server_count; ++i)
    inst.evaluation_positions.push_back((i + 0.5) * spacing_m);
  inst.validate();
  return inst;
}

PlacementInstance make_default_instance() { return make_uniform_instance(10, 400.0); }

ConstraintReport check_constraints(const Placement& placement,
                                   const PlacementInstance& instance) {
  auto th = instance.thresholds();
  return check_constraints(placement, instance, th);
}

ConstraintReport check_constraints(const Placement& placement,
                                   const PlacementInstance& instance,
                                   std::span<const double> thresholds) {
  ConstraintReport report;
  if (placement.server_count() != static_cast<int>(instance.servers.size()))
    throw std::invalid_argument("placement size does not match instance");
  if (thresholds.size() != instance.applications.size())
    throw std::invalid_argument("threshold count does not match applications");

  for (ServiceKind k : kAllServiceKinds) {
    bool needed = std::any_of(
        instance.applications.begin(), instance.applications.end(),
        [&](const ApplicationSpec& a) { return a.needs(k); });
    if (needed && !placement.hosts_anywhere(k)) report.missing_services.push_back(k);
  }

  for (int n = 0; n < placement.server_count(); ++n) {
    const ResourceVector& demand = instance.demand_of(placement.at(n));
    ResourceVector available = instance.servers[n].effective_capacity();
    if (!demand.fits_within(available))
      report.capacity_violations.push_back({n, placement.at(n), demand, available});
  }

  auto zones = instance.evaluation_zones();
  for (int zone : zones) {
    for (size_t a = 0; a < instance.applications.size(); ++a) {
      const ApplicationSpec& app = instance.applications[a];
      bool covered = std::all_of(app.required_services.begin(), app.required_services.end(),
                                 [&](ServiceKind k) { return placement.hosts_anywhere(k); });
      if (!covered) continue;  // already reported as missing coverage
      double d = application_delay(placement, instance.latency, zone, app, instance.params);
      if (d > thresholds[a])
        report.delay_violations.push_back({zone, app.name, d, thresholds[a]});
    }
  }
  return report;
}

}  // namespace v2xplace
