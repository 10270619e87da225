#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "enee/borrow.hpp"
#include "enee/record.hpp"
#include "enee/trial_sim.hpp"

namespace enee {

struct RunStats {
  int regenerations = 0;    // discarded trajectories across all sims
  int failed_records = 0;   // records aborted by unrecoverable fit failure
};

namespace detail {

inline SimulationRecord analyze_dataset(const SimulatedDataset& data,
                                        Scenario scenario, double hr,
                                        int sim_index,
                                        const ScenarioConfig& config,
                                        const SolverConfig& solver) {
  const ModelKind kind =
      scenario == Scenario::exponential ? ModelKind::exponential : ModelKind::cox;
  const InterimSnapshot& snap = data.snapshot;

  SimulationRecord rec;
  rec.scenario = scenario;
  rec.hr = hr;
  rec.sim_index = sim_index;
  rec.base_seed = config.base_seed;
  rec.stream_seed = data.seed;
  rec.n_C = snap.n_C;
  rec.n_E = snap.n_E;
  rec.d_C = snap.d_C;
  rec.d_E = snap.d_E;
  rec.d_ext = snap.d_ext;
  rec.kappa = snap.kappa;
  rec.regeneration_count = data.regenerations;

  // Reference model: trial only. Hybrid model: external subjects pooled
  // into the control stratum with weight 1.
  rec.tau2_ref = fit_model(kind, snap.trial_subjects()).precision;
  rec.tau2_hyb = fit_model(kind, snap.subjects).precision;

  if (scenario == Scenario::exponential)
    rec.estimate_exact = d_eff_exact(rec.tau2_hyb, snap.d_C, snap.d_E);
  rec.estimate_ehss_events = ehss_events(rec.tau2_hyb, rec.tau2_ref, snap.d_C, snap.d_E);
  rec.estimate_ehss_patients =
      ehss_patients(rec.tau2_hyb, rec.tau2_ref, snap.n_C, snap.n_E);

  // A refit failure inside the root search is reported as a failed search,
  // not a lost record, so record counts stay conserved.
  BorrowEstimate gen;
  try {
    gen = d_eff_generalized(snap, rec.tau2_hyb, kind, solver);
  } catch (const EvaluationFailed&) {
    gen.method = BorrowMethod::generalized;
    gen.stability = Stability::unstable_no_root;
  }
  rec.estimate_generalized = gen.d_eff_hat;
  rec.derivative = gen.derivative_at_solution;
  rec.stability = gen.stability;
  if (gen.d_eff_hat)
    rec.effective_patients_generalized = events_to_patients(*gen.d_eff_hat, snap.kappa);
  return rec;
}

}  // namespace detail

/// Run one scenario: for every (hazard ratio, sim index) generate a dataset,
/// fit the reference and hybrid models, and compute every applicable
/// borrowing estimate. Work is distributed over `jobs` threads; each
/// simulation owns a counter-derived RNG stream and writes into its own
/// slot, so the output is byte-identical for any job count.
inline std::vector<SimulationRecord> run_scenario(const ScenarioConfig& config,
                                                  Scenario scenario,
                                                  const SolverConfig& solver = {},
                                                  int jobs = 1,
                                                  RunStats* stats = nullptr,
                                                  std::ostream* log = nullptr) {
  config.validate();
  solver.validate();
  if (jobs < 1) jobs = 1;

  const int n_hr = static_cast<int>(config.hazard_ratios.size());
  const int total = n_hr * config.sims_per_hr;
  std::vector<std::optional<SimulationRecord>> slots(total);
  std::atomic<int> next_task{0};
  std::atomic<int> regen_count{0};
  std::atomic<int> failed{0};
  std::mutex log_mutex;

  auto worker = [&]() {
    for (;;) {
      const int task = next_task.fetch_add(1);
      if (task >= total) return;
      const int hr_index = task / config.sims_per_hr;
      const int sim_index = task % config.sims_per_hr;
      const double hr = config.hazard_ratios[hr_index];
      try {
        const SimulatedDataset data = simulate_dataset(
            config, hr, static_cast<std::uint64_t>(hr_index),
            static_cast<std::uint64_t>(sim_index));
        regen_count.fetch_add(data.regenerations);
        slots[task] = detail::analyze_dataset(data, scenario, hr, sim_index,
                                              config, solver);
      } catch (const Error& e) {
        failed.fetch_add(1);
        if (log) {
          std::lock_guard<std::mutex> lock(log_mutex);
          *log << "record hr=" << hr << " sim=" << sim_index
               << " aborted: " << e.what() << '\n';
        }
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::vector<SimulationRecord> records;
  records.reserve(total);
  for (std::optional<SimulationRecord>& s : slots)
    if (s) records.push_back(std::move(*s));
  if (stats) {
    stats->regenerations = regen_count.load();
    stats->failed_records = failed.load();
  }
  return records;
}

namespace detail {

struct BiasAccumulator {
  int n = 0;
  double sum = 0.0, sumsq = 0.0;
  void add(double err) {
    ++n;
    sum += err;
    sumsq += err * err;
  }
  double bias() const { return sum / n; }
  double sd() const {
    if (n < 2) return 0.0;
    const double b = bias();
    return std::sqrt((sumsq - n * b * b) / (n - 1));
  }
};

}  // namespace detail

/// Empirical bias and standard deviation of (estimate - d_ext), stratified
/// by the stability of the generalized estimate and by hazard ratio.
/// Generalized rows appear only in the stable stratum; EHSS (events scale)
/// rows appear in both strata; exact rows accompany them when present.
/// Empty strata are omitted.
inline std::vector<SummaryRow> summarize(const std::vector<SimulationRecord>& records) {
  std::vector<double> hrs;
  for (const SimulationRecord& r : records)
    if (std::find(hrs.begin(), hrs.end(), r.hr) == hrs.end()) hrs.push_back(r.hr);
  std::sort(hrs.begin(), hrs.end());

  std::vector<SummaryRow> rows;
  auto push = [&rows](const std::string& stratum, double hr,
                      const std::string& method,
                      const detail::BiasAccumulator& acc) {
    if (acc.n == 0) return;
    rows.push_back({stratum, hr, method, acc.n, acc.bias(), acc.sd()});
  };

  for (int stratum = 0; stratum < 2; ++stratum) {
    const bool stable = stratum == 0;
    const std::string label = stable ? "stable" : "unstable";
    for (double hr : hrs) {
      detail::BiasAccumulator gen, ehss, exact;
      for (const SimulationRecord& r : records) {
        if (r.hr != hr) continue;
        if ((r.stability == Stability::stable) != stable) continue;
        if (stable && r.estimate_generalized)
          gen.add(*r.estimate_generalized - r.d_ext);
        ehss.add(r.estimate_ehss_events - r.d_ext);
        if (r.estimate_exact) exact.add(*r.estimate_exact - r.d_ext);
      }
      if (stable) push(label, hr, "generalized", gen);
      push(label, hr, "ehss-events", ehss);
      push(label, hr, "exact-exponential", exact);
    }
  }
  return rows;
}

}  // namespace enee
