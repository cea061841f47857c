// SPDX-License-Identifier: Apache-2.0
//
// Domain types and delay arithmetic for V2X basic-service placement on
// roadside edge servers: resource vectors, the service/application catalogs,
// the pairwise cost matrix, and the end-to-end application delay assembly
// including the vehicle-density penalty on LDM processing time.
#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace v2xplace {

// The three basic services applications are composed of. Indices are dense
// and double as positions in the service catalog.
enum class ServiceKind : int { CA = 0, DEN = 1, Media = 2 };

inline constexpr int kServiceKindCount = 3;
inline constexpr std::array<ServiceKind, kServiceKindCount> kAllServiceKinds = {
    ServiceKind::CA, ServiceKind::DEN, ServiceKind::Media};

constexpr int index_of(ServiceKind k) { return static_cast<int>(k); }
const char* to_string(ServiceKind k);
ServiceKind parse_service_kind(std::string_view s);

// Cores and RAM, compared componentwise.
struct ResourceVector {
  double cores = 0.0;
  double ram_gb = 0.0;

  bool fits_within(const ResourceVector& cap) const {
    return cores <= cap.cores && ram_gb <= cap.ram_gb;
  }
  bool nonnegative() const { return cores >= 0.0 && ram_gb >= 0.0; }

  ResourceVector operator-(const ResourceVector& o) const {
    return {cores - o.cores, ram_gb - o.ram_gb};
  }
  ResourceVector operator+(const ResourceVector& o) const {
    return {cores + o.cores, ram_gb + o.ram_gb};
  }
  bool operator==(const ResourceVector&) const = default;
};

struct ServiceSpec {
  ServiceKind kind = ServiceKind::CA;
  ResourceVector demand;
};

// One V2X application: the basic services it needs, its tolerable delay and
// the reliability target against which violation rates are judged.
struct ApplicationSpec {
  std::string name;
  std::vector<ServiceKind> required_services;  // nonempty, unique
  double delay_threshold_ms = 0.0;
  double reliability_pct = 0.0;

  bool needs(ServiceKind k) const;
  void validate() const;
};

// An RSU-attached edge server. The LDM and an optional reserve for migrating
// value-added services are carved out of the raw capacity up front.
struct EdgeServer {
  int id = 0;
  double position_m = 0.0;  // zone center along the highway
  ResourceVector capacity;
  ResourceVector ldm_demand;
  ResourceVector migration_reserve;

  // capacity - ldm_demand - migration_reserve; throws if any component
  // would be negative.
  ResourceVector effective_capacity() const;
};

// Pairwise cost matrix: entry (i, j) is the delay of a service query issued
// through serving server i to a service hosted on j, i.e. LDM processing on
// i plus the i->j transmission (zero when i == j).
class LatencyMatrix {
 public:
  LatencyMatrix() = default;
  LatencyMatrix(int n, std::vector<double> entries);

  // All-pairs matrix from a fixed processing and transmission cost.
  static LatencyMatrix uniform_expected(int n, double processing_ms,
                                        double transmission_ms);

  int size() const { return n_; }
  double at(int i, int j) const { return c_[static_cast<size_t>(i) * n_ + j]; }
  std::span<const double> row(int i) const {
    return {c_.data() + static_cast<size_t>(i) * n_, static_cast<size_t>(n_)};
  }

 private:
  int n_ = 0;
  std::vector<double> c_;
};

// Assignment of exactly one basic service per server. One-service-per-server
// is structural; coverage of required kinds is checked against an instance.
class Placement {
 public:
  Placement() = default;
  explicit Placement(std::vector<ServiceKind> assignment);

  int server_count() const { return static_cast<int>(assignment_.size()); }
  ServiceKind at(int server) const { return assignment_[server]; }
  std::span<const ServiceKind> assignment() const { return assignment_; }
  bool hosts_anywhere(ServiceKind k) const;

  bool operator==(const Placement&) const = default;

 private:
  std::vector<ServiceKind> assignment_;
};

inline constexpr double kNaturalLogBase = 2.718281828459045235;

struct DelayParameters {
  double d_com_ms = 1.0;  // vehicle -> RSU uplink
  double d_dl_ms = 1.0;   // RSU -> vehicle downlink
  double gamma = 1.0;     // density multiplier applied to the cost matrix
  double density_log_base = kNaturalLogBase;
  double nc_reference = 20.0;  // penalty-free neighbor count

  void validate() const;
};

// A required service kind has no host anywhere in the placement.
class NoHostError : public std::runtime_error {
 public:
  explicit NoHostError(ServiceKind k);
  ServiceKind kind;
};

// LDM processing time with the neighbor-count penalty: base plus
// log_b(nc / nc_reference), clamped at zero for nc <= nc_reference.
double density_adjusted_processing(double base_ms, int nc,
                                   const DelayParameters& params);

// Fixed association so that every caller composes the delay with identical
// floating-point rounding.
inline double compose_application_delay(double d_com, double worst_service,
                                        double d_dl) {
  return d_com + worst_service + d_dl;
}

// Cheapest way to reach a host of `kind` from `serving`: min over hosting
// servers j of gamma * cost_row[j]. Throws NoHostError when uncovered.
double service_delay_row(std::span<const double> cost_row,
                         const Placement& placement, ServiceKind kind,
                         double gamma);
double service_delay(const Placement& placement, const LatencyMatrix& c,
                     int serving, ServiceKind kind, double gamma);

// End-to-end application delay: uplink + worst required-service delay +
// downlink. Services run in parallel, so the worst branch dominates.
double application_delay_row(std::span<const double> cost_row,
                             const Placement& placement,
                             const ApplicationSpec& app,
                             const DelayParameters& params);
double application_delay(const Placement& placement, const LatencyMatrix& c,
                         int serving, const ApplicationSpec& app,
                         const DelayParameters& params);

// Built-in catalogs: CA 2 cores/2 GB, DEN 2/4, Media 4/6; applications
// PL, SSM, ES, PSW, FCW with their delay thresholds and reliabilities.
std::vector<ServiceSpec> default_service_catalog();
std::vector<ApplicationSpec> default_application_catalog();
ResourceVector default_server_capacity();  // 8 cores / 8 GB
ResourceVector default_ldm_demand();       // 4 cores / 2 GB

}  // namespace v2xplace
