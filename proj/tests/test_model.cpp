// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "v2xplace/instance.hpp"
#include "v2xplace/model.hpp"
#include "v2xplace/rng.hpp"

using namespace v2xplace;

namespace {

EdgeServer make_server(int id, ResourceVector cap, ResourceVector ldm,
                       ResourceVector reserve) {
  EdgeServer s;
  s.id = id;
  s.position_m = (id + 0.5) * 400.0;
  s.capacity = cap;
  s.ldm_demand = ldm;
  s.migration_reserve = reserve;
  return s;
}

const ApplicationSpec& app_named(const std::vector<ApplicationSpec>& apps,
                                 const std::string& name) {
  for (const auto& a : apps)
    if (a.name == name) return a;
  throw std::logic_error("no such app");
}

}  // namespace

TEST_CASE("effective capacity accounting") {
  EdgeServer s = make_server(0, {8, 8}, {4, 2}, {0, 0});
  CHECK(s.effective_capacity() == ResourceVector{4, 6});

  EdgeServer zero = make_server(1, {8, 8}, {0, 0}, {0, 0});
  CHECK(zero.effective_capacity() == ResourceVector{8, 8});

  EdgeServer reserved = make_server(2, {8, 8}, {4, 2}, {2, 2});
  CHECK(reserved.effective_capacity() == ResourceVector{2, 4});
  // Media needs (4, 6): no longer feasible once the reserve is carved out.
  ResourceVector media{4, 6};
  CHECK(media.fits_within(s.effective_capacity()));
  CHECK_FALSE(media.fits_within(reserved.effective_capacity()));

  EdgeServer overdrawn = make_server(3, {8, 8}, {4, 2}, {5, 5});
  CHECK_THROWS_AS(overdrawn.effective_capacity(), std::invalid_argument);
}

TEST_CASE("density adjusted processing") {
  DelayParameters params;
  CHECK(density_adjusted_processing(4.0, 20, params) == 4.0);
  CHECK(density_adjusted_processing(4.0, 5, params) == 4.0);
  CHECK(density_adjusted_processing(4.0, 0, params) == 4.0);
  CHECK(density_adjusted_processing(4.0, 200, params) ==
        doctest::Approx(4.0 + std::log(10.0)).epsilon(1e-12));

  DelayParameters base10 = params;
  base10.density_log_base = 10.0;
  CHECK(density_adjusted_processing(4.0, 200, base10) ==
        doctest::Approx(5.0).epsilon(1e-12));

  // Flat up to the reference count, strictly increasing beyond it.
  for (int nc = 0; nc <= 20; ++nc)
    CHECK(density_adjusted_processing(4.0, nc, params) == 4.0);
  double prev = 4.0;
  for (int nc = 21; nc < 60; ++nc) {
    double cur = density_adjusted_processing(4.0, nc, params);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("service delay picks the cheapest host") {
  LatencyMatrix c = LatencyMatrix::uniform_expected(3, 4.0, 3.0);

  Placement local({ServiceKind::CA, ServiceKind::DEN, ServiceKind::Media});
  CHECK(service_delay(local, c, 1, ServiceKind::DEN, 1.0) == 4.0);  // C[1][1]
  CHECK(service_delay(local, c, 1, ServiceKind::CA, 1.0) == 7.0);   // C[1][0]

  // Serving server 1 hosts CA itself.
  Placement ca_everywhere({ServiceKind::CA, ServiceKind::CA, ServiceKind::DEN});
  CHECK(service_delay(ca_everywhere, c, 1, ServiceKind::CA, 1.0) == 4.0);

  // Hosts on 0 and 3 with distinct row costs: the min wins.
  std::vector<double> entries{
      4, 5, 6, 7,   //
      6, 4, 8, 9,   //
      5, 6, 4, 7,   //
      9, 8, 7, 4,   //
  };
  LatencyMatrix c4(4, entries);
  Placement spread({ServiceKind::Media, ServiceKind::CA, ServiceKind::DEN,
                    ServiceKind::Media});
  CHECK(service_delay(spread, c4, 1, ServiceKind::Media, 1.0) == 6.0);

  // gamma scales the whole cost row.
  CHECK(service_delay(local, c, 0, ServiceKind::Media, 2.0) == doctest::Approx(14.0));

  Placement no_media({ServiceKind::CA, ServiceKind::DEN, ServiceKind::DEN});
  CHECK_THROWS_AS(service_delay(no_media, c, 0, ServiceKind::Media, 1.0), NoHostError);
}

TEST_CASE("application delay is uplink + worst parallel branch + downlink") {
  auto apps = default_application_catalog();
  DelayParameters params;  // 1 ms up, 1 ms down
  LatencyMatrix c = LatencyMatrix::uniform_expected(2, 4.0, 3.0);
  Placement p({ServiceKind::CA, ServiceKind::DEN});

  // CA local (4), DEN remote (7): PSW rides the slower branch.
  CHECK(application_delay(p, c, 0, app_named(apps, "PSW"), params) == 9.0);
  // Single-service application: max over a singleton.
  CHECK(application_delay(p, c, 0, app_named(apps, "PL"), params) == 6.0);
  // PSW and FCW need the same services, so their delays coincide exactly.
  CHECK(application_delay(p, c, 0, app_named(apps, "PSW"), params) ==
        application_delay(p, c, 0, app_named(apps, "FCW"), params));
}

TEST_CASE("constraint report") {
  PlacementInstance inst = make_uniform_instance(3, 400.0);

  SUBCASE("capacity satisfied with equality") {
    // Media (4, 6) exactly fills the effective capacity (4, 6).
    Placement p({ServiceKind::CA, ServiceKind::DEN, ServiceKind::Media});
    auto report = check_constraints(p, inst);
    CHECK(report.capacity_ok());
    CHECK(report.coverage_ok());
    CHECK(report.ok());
  }

  SUBCASE("capacity violated on RAM") {
    // Reserve shrinks effective capacity to (2, 2); DEN needs (2, 4).
    for (auto& s : inst.servers) s.migration_reserve = {2.0, 4.0};
    Placement p({ServiceKind::CA, ServiceKind::DEN, ServiceKind::CA});
    auto report = check_constraints(p, inst);
    REQUIRE(report.capacity_violations.size() == 1);
    CHECK(report.capacity_violations[0].server == 1);
    CHECK(report.capacity_violations[0].demand.ram_gb >
          report.capacity_violations[0].available.ram_gb);
    CHECK_FALSE(report.ok());
  }

  SUBCASE("delay threshold boundary") {
    // Remote DEN at expected costs: ES delay = 1 + (proc + trans) + 1.
    Placement p({ServiceKind::CA, ServiceKind::CA, ServiceKind::DEN});
    inst.latency = LatencyMatrix::uniform_expected(3, 4.5, 3.0);  // ES -> 9.5
    auto ok_report = check_constraints(p, inst);
    for (const auto& v : ok_report.delay_violations) CHECK(v.app != "ES");

    inst.latency = LatencyMatrix::uniform_expected(3, 5.5, 3.0);  // ES -> 10.5
    auto bad_report = check_constraints(p, inst);
    bool es_violated = false;
    for (const auto& v : bad_report.delay_violations)
      if (v.app == "ES" && v.delay_ms == 10.5) es_violated = true;
    CHECK(es_violated);
  }

  SUBCASE("coverage reported, delay checks skipped for uncovered apps") {
    Placement p({ServiceKind::CA, ServiceKind::DEN, ServiceKind::CA});
    auto report = check_constraints(p, inst);
    REQUIRE(report.missing_services.size() == 1);
    CHECK(report.missing_services[0] == ServiceKind::Media);
    for (const auto& v : report.delay_violations) CHECK(v.app != "SSM");
  }
}

TEST_CASE("delay monotonicity properties") {
  auto apps = default_application_catalog();
  DelayParameters params;
  SplitMix64 rng(20260810);

  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng.next_u64() % 5);
    std::vector<double> entries(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      double diag = rng.uniform(2.0, 6.0);
      for (int j = 0; j < n; ++j)
        entries[static_cast<size_t>(i) * n + j] =
            i == j ? diag : diag + rng.uniform(0.1, 6.0);
    }
    LatencyMatrix c(n, entries);
    std::vector<ServiceKind> assignment(n);
    for (int j = 0; j < n; ++j)
      assignment[j] = kAllServiceKinds[rng.next_u64() % kServiceKindCount];
    // Force full coverage.
    for (int k = 0; k < kServiceKindCount && k < n; ++k)
      assignment[k] = kAllServiceKinds[k];
    Placement p(assignment);
    int serving = static_cast<int>(rng.next_u64() % n);

    // Required-service supersets never get faster.
    double pl = application_delay(p, c, serving, app_named(apps, "PL"), params);
    double psw = application_delay(p, c, serving, app_named(apps, "PSW"), params);
    double ssm = application_delay(p, c, serving, app_named(apps, "SSM"), params);
    double es = application_delay(p, c, serving, app_named(apps, "ES"), params);
    double fcw = application_delay(p, c, serving, app_named(apps, "FCW"), params);
    CHECK(pl <= psw);
    CHECK(es <= psw);
    CHECK(psw <= ssm);
    CHECK(psw == fcw);

    // Adding a replica of a kind never increases its service delay.
    if (n > kServiceKindCount) {
      ServiceKind kind = kAllServiceKinds[rng.next_u64() % kServiceKindCount];
      int extra = kServiceKindCount +
                  static_cast<int>(rng.next_u64() % (n - kServiceKindCount));
      std::vector<ServiceKind> more = assignment;
      more[extra] = kind;
      Placement p2(more);
      CHECK(service_delay(p2, c, serving, kind, 1.0) <=
            service_delay(p, c, serving, kind, 1.0));
    }
  }
}

TEST_CASE("catalog matches the built-in tables") {
  auto services = default_service_catalog();
  REQUIRE(services.size() == 3);
  CHECK(services[index_of(ServiceKind::CA)].demand == ResourceVector{2, 2});
  CHECK(services[index_of(ServiceKind::DEN)].demand == ResourceVector{2, 4});
  CHECK(services[index_of(ServiceKind::Media)].demand == ResourceVector{4, 6});

  auto apps = default_application_catalog();
  REQUIRE(apps.size() == 5);
  CHECK(app_named(apps, "PL").delay_threshold_ms == 50.0);
  CHECK(app_named(apps, "PL").reliability_pct == 90.0);
  CHECK(app_named(apps, "SSM").required_services.size() == 3);
  CHECK(app_named(apps, "ES").delay_threshold_ms == 10.0);
  CHECK(app_named(apps, "PSW").reliability_pct == 95.0);
  CHECK(app_named(apps, "FCW").delay_threshold_ms == 10.0);
  CHECK(app_named(apps, "PSW").required_services ==
        app_named(apps, "FCW").required_services);
  for (const auto& a : apps) CHECK_NOTHROW(a.validate());
}

TEST_CASE("type invariants are enforced") {
  CHECK_THROWS_AS(Placement(std::vector<ServiceKind>{}), std::invalid_argument);

  ApplicationSpec bad{"X", {}, 10.0, 95.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  ApplicationSpec zero_threshold{"X", {ServiceKind::CA}, 0.0, 95.0};
  CHECK_THROWS_AS(zero_threshold.validate(), std::invalid_argument);
  ApplicationSpec bad_rel{"X", {ServiceKind::CA}, 10.0, 0.0};
  CHECK_THROWS_AS(bad_rel.validate(), std::invalid_argument);

  // Off-diagonal below the diagonal means negative transmission.
  std::vector<double> entries{4, 3, 5, 4};
  CHECK_THROWS_AS(LatencyMatrix(2, entries), std::invalid_argument);
  std::vector<double> nonpositive{4, 5, 0, 4};
  CHECK_THROWS_AS(LatencyMatrix(2, nonpositive), std::invalid_argument);

  DelayParameters params;
  params.gamma = 0.5;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}
