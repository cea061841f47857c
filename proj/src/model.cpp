// SPDX-License-Identifier: Apache-2.0

#include "v2xplace/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace v2xplace {

const char* to_string(ServiceKind k) {
  switch (k) {
    case ServiceKind::CA:
      return "CA";
    case ServiceKind::DEN:
      return "DEN";
    case ServiceKind::Media:
      return "Media";
  }
  return "?";
}

ServiceKind parse_service_kind(std::string_view s) {
  if (s == "CA") return ServiceKind::CA;
  if (s == "DEN") return ServiceKind::DEN;
  if (s == "Media") return ServiceKind::Media;
  throw std::invalid_argument("unknown service kind: " + std::string(s));
}

bool ApplicationSpec::needs(ServiceKind k) const {
  return std::find(required_services.begin(), required_services.end(), k) !=
         required_services.end();
}

void ApplicationSpec::validate() const {
  if (name.empty()) throw std::invalid_argument("application name empty");
  if (required_services.empty())
    throw std::invalid_argument("application " + name + ": no required services");
  for (size_t i = 0; i < required_services.size(); ++i)
    for (size_t j = i + 1; j < required_services.size(); ++j)
      if (required_services[i] == required_services[j])
        throw std::invalid_argument("application " + name + ": duplicate service");
  if (!(delay_threshold_ms > 0.0))
    throw std::invalid_argument("application " + name + ": delay threshold must be > 0");
  if (!(reliability_pct > 0.0 && reliability_pct <= 100.0))
    throw std::invalid_argument("application " + name + ": reliability must be in (0, 100]");
}

ResourceVector EdgeServer::effective_capacity() const {
  ResourceVector eff = capacity - ldm_demand - migration_reserve;
  if (!eff.nonnegative())
    throw std::invalid_argument("server " + std::to_string(id) +
                                ": LDM demand plus migration reserve exceeds capacity");
  return eff;
}

LatencyMatrix::LatencyMatrix(int n, std::vector<double> entries)
    : n_(n), c_(std::move(entries)) {
  if (n_ <= 0) throw std::invalid_argument("latency matrix: size must be positive");
  if (c_.size() != static_cast<size_t>(n_) * n_)
    throw std::invalid_argument("latency matrix: entry count does not match size");
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (!(at(i, j) > 0.0))
        throw std::invalid_argument("latency matrix: entries must be positive");
      if (at(i, j) < at(i, i))
        throw std::invalid_argument(
            "latency matrix: off-diagonal entry below the processing-only diagonal");
    }
  }
}

LatencyMatrix LatencyMatrix::uniform_expected(int n, double processing_ms,
                                              double transmission_ms) {
  std::vector<double> c(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      c[static_cast<size_t>(i) * n + j] =
          i == j ? processing_ms : processing_ms + transmission_ms;
  return LatencyMatrix(n, std::move(c));
}

Placement::Placement(std::vector<ServiceKind> assignment)
    : assignment_(std::move(assignment)) {
  if (assignment_.empty()) throw std::invalid_argument("placement: no servers");
}

bool Placement::hosts_anywhere(ServiceKind k) const {
  return std::find(assignment_.begin(), assignment_.end(), k) != assignment_.end();
}

void DelayParameters::validate() const {
  if (!(d_com_ms > 0.0)) throw std::invalid_argument("d_com must be > 0");
  if (!(d_dl_ms > 0.0)) throw std::invalid_argument("d_dl must be > 0");
  if (!(gamma >= 1.0)) throw std::invalid_argument("gamma must be >= 1");
  if (!(density_log_base > 1.0))
    throw std::invalid_argument("density log base must be > 1");
  if (!(nc_reference >= 1.0)) throw std::invalid_argument("nc_reference must be >= 1");
}

NoHostError::NoHostError(ServiceKind k)
    : std::runtime_error(std::string("no server hosts service ") + to_string(k)),
      kind(k) {}

double density_adjusted_processing(double base_ms, int nc,
                                   const DelayParameters& params) {
  if (static_cast<double>(nc) <= params.nc_reference) return base_ms;
  double penalty = std::log(static_cast<double>(nc) / params.nc_reference) /
                   std::log(params.density_log_base);
  return base_ms + std::max(0.0, penalty);
}

double service_delay_row(std::span<const double> cost_row,
                         const Placement& placement, ServiceKind kind,
                         double gamma) {
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (int j = 0; j < placement.server_count(); ++j) {
    if (placement.at(j) != kind) continue;
    found = true;
    best = std::min(best, gamma * cost_row[j]);
  }
  if (!found) throw NoHostError(kind);
  return best;
}

double service_delay(const Placement& placement, const LatencyMatrix& c,
                     int serving, ServiceKind kind, double gamma) {
  return service_delay_row(c.row(serving), placement, kind, gamma);
}

double application_delay_row(std::span<const double> cost_row,
                             const Placement& placement,
                             const ApplicationSpec& app,
                             const DelayParameters& params) {
  double worst = 0.0;
  for (ServiceKind kind : app.required_services)
    worst = std::max(worst, service_delay_row(cost_row, placement, kind, params.gamma));
  return compose_application_delay(params.d_com_ms, worst, params.d_dl_ms);
}

double application_delay(const Placement& placement, const LatencyMatrix& c,
                         int serving, const ApplicationSpec& app,
                         const DelayParameters& params) {
  return application_delay_row(c.row(serving), placement, app, params);
}

std::vector<ServiceSpec> default_service_catalog() {
  return {{ServiceKind::CA, {2.0, 2.0}},
          {ServiceKind::DEN, {2.0, 4.0}},
          {ServiceKind::Media, {4.0, 6.0}}};
}

std::vector<ApplicationSpec> default_application_catalog() {
  using enum ServiceKind;
  return {
      {"PL", {CA}, 50.0, 90.0},
      {"SSM", {CA, DEN, Media}, 20.0, 90.0},
      {"ES", {DEN}, 10.0, 95.0},
      {"PSW", {CA, DEN}, 20.0, 95.0},
      {"FCW", {CA, DEN}, 10.0, 95.0},
  };
}

ResourceVector default_server_capacity() { return {8.0, 8.0}; }
ResourceVector default_ldm_demand() { return {4.0, 2.0}; }

}  // namespace v2xplace
