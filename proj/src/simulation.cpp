// SPDX-License-Identifier: Apache-2.0

#include "v2xplace/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace v2xplace {

void StochasticLatencyModel::validate() const {
  if (!(processing_min_ms > 0.0 && processing_min_ms <= processing_max_ms))
    throw std::invalid_argument("latency model: bad processing range");
  if (!(transmission_min_ms > 0.0 && transmission_min_ms <= transmission_max_ms))
    throw std::invalid_argument("latency model: bad transmission range");
}

void realize_cost_row(SplitMix64& rng, int serving, int server_count, int nc,
                      const StochasticLatencyModel& model,
                      const DelayParameters& params, std::span<double> row) {
  double processing = rng.uniform(model.processing_min_ms, model.processing_max_ms);
  double adjusted = density_adjusted_processing(processing, nc, params);
  for (int j = 0; j < server_count; ++j) {
    row[j] = adjusted;
    if (j != serving)
      row[j] += rng.uniform(model.transmission_min_ms, model.transmission_max_ms);
  }
}

std::vector<DelaySample> run_simulation(const Placement& placement,
                                        const TrafficScenario& scenario,
                                        const StochasticLatencyModel& model,
                                        const PlacementInstance& instance,
                                        const MobilityParams& mobility) {
  instance.validate();
  model.validate();
  if (placement.server_count() != static_cast<int>(instance.servers.size()))
    throw std::invalid_argument("placement size does not match instance");
  for (const auto& app : instance.applications)
    for (ServiceKind k : app.required_services)
      if (!placement.hosts_anywhere(k)) throw NoHostError(k);

  int n = placement.server_count();
  std::vector<double> row(static_cast<size_t>(n));
  std::vector<DelaySample> samples;

  for (int run = 0; run < scenario.runs; ++run) {
    std::uint64_t run_seed = mix_seed(scenario.seed, static_cast<std::uint64_t>(run));
    TraceRun trace = simulate_trace(scenario, mobility, instance.servers, run_seed);
    for (size_t s = 0; s < trace.snapshots.size(); ++s) {
      const TraceSnapshot& snap = trace.snapshots[s];
      for (const VehicleSnapshot& vs : snap.vehicles) {
        SplitMix64 rng(mix_seed(model.seed, static_cast<std::uint64_t>(run),
                                static_cast<std::uint64_t>(s),
                                static_cast<std::uint64_t>(vs.vehicle)));
        realize_cost_row(rng, vs.serving_server, n, vs.nc, model, instance.params, row);
        for (size_t a = 0; a < instance.applications.size(); ++a) {
          double delay = application_delay_row(row, placement,
                                               instance.applications[a],
                                               instance.params);
          samples.push_back({run, snap.timestamp_s, vs.vehicle, static_cast<int>(a),
                             delay, vs.serving_server, vs.nc});
        }
      }
    }
  }
  return samples;
}

Histogram make_histogram(std::span<const double> values, int bins) {
  if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
  Histogram h;
  if (values.empty()) return h;
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it, hi = *hi_it;
  if (lo == hi) {
    // Degenerate distribution: one unit-width bin around the single value.
    h.bin_edges = {lo - 0.5, lo + 0.5};
    h.densities = {1.0};
    return h;
  }
  double width = (hi - lo) / bins;
  h.bin_edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) h.bin_edges[b] = lo + width * b;
  h.bin_edges[bins] = hi;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    int b = static_cast<int>((v - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    ++counts[b];
  }
  h.densities.resize(bins);
  double total = static_cast<double>(values.size());
  for (int b = 0; b < bins; ++b)
    h.densities[b] = static_cast<double>(counts[b]) / (total * width);
  return h;
}

SummaryReport summarize(std::span<const DelaySample> samples,
                        std::span<const ApplicationSpec> apps, int bins) {
  SummaryReport report;
  report.total_samples = samples.size();
  int max_run = -1;
  for (const DelaySample& s : samples) max_run = std::max(max_run, s.run);
  report.runs = max_run + 1;

  std::vector<std::vector<double>> values(apps.size());
  std::vector<std::vector<double>> run_sum(apps.size());
  std::vector<std::vector<std::size_t>> run_count(apps.size());
  std::vector<std::size_t> violations(apps.size(), 0);
  for (auto& v : run_sum) v.assign(static_cast<size_t>(report.runs), 0.0);
  for (auto& v : run_count) v.assign(static_cast<size_t>(report.runs), 0);

  for (const DelaySample& s : samples) {
    if (s.app < 0 || s.app >= static_cast<int>(apps.size()))
      throw std::invalid_argument("sample references an unknown application");
    values[s.app].push_back(s.delay_ms);
    run_sum[s.app][s.run] += s.delay_ms;
    ++run_count[s.app][s.run];
    if (s.delay_ms > apps[s.app].delay_threshold_ms) ++violations[s.app];
  }

  report.apps.resize(apps.size());
  for (size_t a = 0; a < apps.size(); ++a) {
    AppSummary& out = report.apps[a];
    out.app = apps[a].name;
    out.threshold_ms = apps[a].delay_threshold_ms;
    out.count = values[a].size();
    if (values[a].empty()) {
      out.empty = true;
      continue;
    }
    double sum = 0.0;
    for (double v : values[a]) sum += v;
    out.mean_ms = sum / static_cast<double>(out.count);
    out.violation_rate =
        static_cast<double>(violations[a]) / static_cast<double>(out.count);
    double run_mean_sum = 0.0;
    int runs_with_samples = 0;
    for (int r = 0; r < report.runs; ++r) {
      if (run_count[a][r] == 0) {
        out.per_run_mean_ms.push_back(0.0);
        continue;
      }
      double m = run_sum[a][r] / static_cast<double>(run_count[a][r]);
      out.per_run_mean_ms.push_back(m);
      run_mean_sum += m;
      ++runs_with_samples;
    }
    out.cross_run_mean_ms =
        runs_with_samples > 0 ? run_mean_sum / runs_with_samples : 0.0;
    out.histogram = make_histogram(values[a], bins);
  }
  return report;
}

ComparisonReport compare_strategies(std::span<const SolverTag> strategies,
                                    const TrafficScenario& scenario,
                                    const StochasticLatencyModel& model,
                                    const PlacementInstance& instance,
                                    const MobilityParams& mobility, int bins,
                                    const SolveOptions& opts) {
  ComparisonReport report;
  report.scenario = scenario.name;
  for (SolverTag tag : strategies) {
    StrategyComparison entry;
    entry.tag = tag;
    entry.solve = solve_with(tag, instance, opts);
    if (entry.solve.feasible()) {
      auto samples = run_simulation(*entry.solve.placement, scenario, model,
                                    instance, mobility);
      entry.summary = summarize(samples, instance.applications, bins);
    }
    report.strategies.push_back(std::move(entry));
  }
  return report;
}

SweepReport density_sweep(std::span<const TrafficScenario> scenarios,
                          const PlacementInstance& instance, SolverTag strategy,
                          const StochasticLatencyModel& model,
                          const MobilityParams& mobility, int bins,
                          const SolveOptions& opts) {
  if (scenarios.size() < 2)
    throw std::invalid_argument("density sweep needs at least two scenarios");
  SweepReport report;
  report.solve = solve_with(strategy, instance, opts);
  if (!report.solve.feasible()) return report;

  for (const TrafficScenario& scenario : scenarios) {
    auto samples =
        run_simulation(*report.solve.placement, scenario, model, instance, mobility);
    report.scenario_names.push_back(scenario.name);
    report.summaries.push_back(summarize(samples, instance.applications, bins));
  }

  for (size_t i = 0; i + 1 < report.summaries.size(); ++i) {
    SweepStep step;
    step.from = report.scenario_names[i];
    step.to = report.scenario_names[i + 1];
    double max_change = -std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < instance.applications.size(); ++a) {
      const AppSummary& before = report.summaries[i].apps[a];
      const AppSummary& after = report.summaries[i + 1].apps[a];
      AppMeanChange change;
      change.app = before.app;
      change.mean_before_ms = before.cross_run_mean_ms;
      change.mean_after_ms = after.cross_run_mean_ms;
      change.relative_change =
          before.cross_run_mean_ms == 0.0
              ? 0.0
              : (after.cross_run_mean_ms - before.cross_run_mean_ms) /
                    before.cross_run_mean_ms;
      if (change.relative_change > max_change) {
        max_change = change.relative_change;
        step.max_change_app = change.app;
      }
      step.changes.push_back(std::move(change));
    }
    report.steps.push_back(std::move(step));
  }
  return report;
}

}  // namespace v2xplace
