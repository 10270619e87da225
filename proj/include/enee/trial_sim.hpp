#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "enee/errors.hpp"
#include "enee/rng.hpp"
#include "enee/subject.hpp"

namespace enee {

/// Data-generating settings for one scenario run.
struct ScenarioConfig {
  std::vector<double> hazard_ratios{0.4, 0.6, 0.8, 1.0};
  int sims_per_hr = 1000;
  int trial_size_min = 60;
  int trial_size_max = 100;
  double censor_prob_min = 0.05;
  double censor_prob_max = 0.10;
  double interim_event_fraction = 0.33;
  int min_events_per_arm = 10;
  double enrollment_rate = 2.0;        // subjects per month
  double control_hazard = 1.0 / 12.0;  // events per month at shape 1
  double weibull_shape = 1.0;          // 1.0 exponential, 1.15 Weibull scenario
  int external_size_min = 10;
  std::uint64_t base_seed = 20260809;

  /// Weibull scale: chosen so shape 1 reduces to rate control_hazard.
  double scale() const { return 1.0 / control_hazard; }

  void validate() const {
    if (hazard_ratios.empty()) throw InvalidConfig("hazard_ratios must be nonempty");
    for (double hr : hazard_ratios)
      if (!(hr > 0.0)) throw InvalidConfig("hazard ratios must be positive");
    if (sims_per_hr < 1) throw InvalidConfig("sims_per_hr must be >= 1");
    if (trial_size_min < 2 || trial_size_max < trial_size_min)
      throw InvalidConfig("trial_size_range must be a nonempty interval with min >= 2");
    if (!(censor_prob_min > 0.0) || !(censor_prob_max < 1.0) ||
        censor_prob_max < censor_prob_min)
      throw InvalidConfig("censor_prob_range must be a nonempty interval inside (0,1)");
    if (!(interim_event_fraction > 0.0) || !(interim_event_fraction < 1.0))
      throw InvalidConfig("interim_event_fraction must be in (0,1)");
    if (min_events_per_arm < 1) throw InvalidConfig("min_events_per_arm must be >= 1");
    if (!(enrollment_rate > 0.0)) throw InvalidConfig("enrollment_rate must be positive");
    if (!(control_hazard > 0.0)) throw InvalidConfig("control_hazard must be positive");
    if (!(weibull_shape > 0.0)) throw InvalidConfig("weibull_shape must be positive");
    if (external_size_min < 1) throw InvalidConfig("external_size_min must be >= 1");
  }
};

/// Latent trajectory for one trial subject: event and censoring times are
/// measured from the subject's enrollment.
struct SubjectDraw {
  int id;
  Cohort cohort;
  double enrollment_time;
  double event_time;
  double censor_time;
};

/// Full simulated trial before any interim truncation.
struct Trial {
  int size = 0;
  double censor_prob = 0.0;
  std::vector<SubjectDraw> draws;
};

/// Exponential censoring rate tuned so that, in the exponential scenario,
/// the probability of censoring before the event is exactly p.
inline double censoring_rate(const ScenarioConfig& config, double p) {
  return config.control_hazard * p / (1.0 - p);
}

/// Generate one trial: N ~ uniform on the size range, censoring probability
/// p ~ uniform on its range, linear enrollment at enrollment_rate with
/// deterministic 1:1 alternation, Weibull event times with proportional
/// hazards (scale * hr^(-1/shape) in the experimental arm), independent
/// exponential censoring.
inline Trial generate_trial(const ScenarioConfig& config, double hr,
                            RngStream& rng) {
  Trial trial;
  trial.size = static_cast<int>(
      rng.uniform_int(config.trial_size_min, config.trial_size_max));
  trial.censor_prob = rng.uniform(config.censor_prob_min, config.censor_prob_max);
  const double k = config.weibull_shape;
  const double scale_control = config.scale();
  const double scale_experimental = scale_control * std::pow(hr, -1.0 / k);
  const double cens_rate = censoring_rate(config, trial.censor_prob);
  trial.draws.reserve(trial.size);
  for (int i = 0; i < trial.size; ++i) {
    SubjectDraw d;
    d.id = i;
    d.cohort = i % 2 == 0 ? Cohort::trial_control : Cohort::trial_experimental;
    d.enrollment_time = i / config.enrollment_rate;
    d.event_time = rng.weibull(
        k, d.cohort == Cohort::trial_control ? scale_control : scale_experimental);
    d.censor_time = rng.exponential(cens_rate);
    trial.draws.push_back(d);
  }
  return trial;
}

/// Total-event threshold for the interim trigger. The small slack keeps
/// ceil from rounding exact products like 0.33*100 up a notch.
inline int interim_event_threshold(const ScenarioConfig& config, int trial_size) {
  return static_cast<int>(
      std::ceil(config.interim_event_fraction * trial_size - 1e-9));
}

/// Earliest calendar time at which the observed-event count reaches the
/// interim fraction of the trial size AND each arm has at least
/// min_events_per_arm observed events. Events tied on calendar time are
/// processed in subject-id order.
inline double find_interim_time(const Trial& trial, const ScenarioConfig& config) {
  struct EventAt {
    double calendar_time;
    int id;
    Cohort cohort;
  };
  std::vector<EventAt> events;
  for (const SubjectDraw& d : trial.draws) {
    if (d.event_time <= d.censor_time)
      events.push_back({d.enrollment_time + d.event_time, d.id, d.cohort});
  }
  std::sort(events.begin(), events.end(), [](const EventAt& a, const EventAt& b) {
    if (a.calendar_time != b.calendar_time) return a.calendar_time < b.calendar_time;
    return a.id < b.id;
  });
  const int threshold = interim_event_threshold(config, trial.size);
  int total = 0, control = 0, experimental = 0;
  for (const EventAt& e : events) {
    ++total;
    (e.cohort == Cohort::trial_control ? control : experimental)++;
    if (total >= threshold && control >= config.min_events_per_arm &&
        experimental >= config.min_events_per_arm)
      return e.calendar_time;
  }
  throw TriggerNeverReached("interim condition never met for this trajectory");
}

/// Freeze the trial at the interim: keep subjects enrolled before
/// interim_time, administratively censor follow-up at
/// interim_time - enrollment_time (events landing exactly on the interim
/// time are kept: only events after the interim are censored), and compute
/// the snapshot counts.
inline InterimSnapshot apply_interim(const Trial& trial, double interim_time) {
  InterimSnapshot snap;
  snap.interim_time = interim_time;
  for (const SubjectDraw& d : trial.draws) {
    if (!(d.enrollment_time < interim_time)) continue;
    const double window = interim_time - d.enrollment_time;
    const bool event_first = d.event_time <= d.censor_time;
    // Same calendar-time expression as the trigger scan, so the event that
    // defines the interim is never lost to rounding.
    const bool event =
        event_first && d.enrollment_time + d.event_time <= interim_time;
    double followup;
    if (event)
      followup = std::min(d.event_time, window);
    else if (event_first)
      followup = window;  // event lands after the interim
    else
      followup = std::min(d.censor_time, window);
    snap.subjects.emplace_back(d.id, d.cohort, d.enrollment_time, followup, event);
    if (d.cohort == Cohort::trial_control) {
      ++snap.n_C;
      if (event) ++snap.d_C;
    } else {
      ++snap.n_E;
      if (event) ++snap.d_E;
    }
    snap.max_followup = std::max(snap.max_followup, followup);
  }
  snap.kappa = snap.n_C > 0 ? static_cast<double>(snap.d_C) / snap.n_C : 0.0;
  return snap;
}

/// External comparator cohort plus its observed event count.
struct ExternalCohort {
  std::vector<Subject> subjects;
  int d_ext = 0;
};

/// Draw the external cohort: size uniform on [external_size_min, n_C],
/// event and censoring times from the trial-control distributions
/// (hr_external scales the hazard; 1 = same distribution), follow-up
/// truncated at the trial's maximum follow-up.
inline ExternalCohort generate_external(const InterimSnapshot& snapshot,
                                        const ScenarioConfig& config,
                                        double censor_prob, RngStream& rng,
                                        double hr_external = 1.0) {
  if (snapshot.n_C < config.external_size_min)
    throw ExternalSizeInfeasible("fewer than " +
                                 std::to_string(config.external_size_min) +
                                 " trial controls enrolled at interim");
  const int m = static_cast<int>(
      rng.uniform_int(config.external_size_min, snapshot.n_C));
  const double k = config.weibull_shape;
  const double scale = config.scale() * std::pow(hr_external, -1.0 / k);
  const double cens_rate = censoring_rate(config, censor_prob);
  ExternalCohort ext;
  ext.subjects.reserve(m);
  int next_id = 0;
  for (const Subject& s : snapshot.subjects) next_id = std::max(next_id, s.id + 1);
  for (int j = 0; j < m; ++j) {
    const double event_time = rng.weibull(k, scale);
    const double censor_time = rng.exponential(cens_rate);
    const double raw = std::min(event_time, censor_time);
    const double followup = std::min(raw, snapshot.max_followup);
    const bool event =
        event_time <= censor_time && event_time <= snapshot.max_followup;
    ext.subjects.emplace_back(next_id + j, Cohort::external, 0.0, followup, event);
    if (event) ++ext.d_ext;
  }
  return ext;
}

/// Append the external cohort to the snapshot's analysis set.
inline void append_external(InterimSnapshot& snapshot, const ExternalCohort& ext) {
  snapshot.subjects.insert(snapshot.subjects.end(), ext.subjects.begin(),
                           ext.subjects.end());
  snapshot.d_ext = ext.d_ext;
}

/// One complete simulated dataset, ready for analysis.
struct SimulatedDataset {
  InterimSnapshot snapshot;  // trial + external, d_ext set
  double censor_prob = 0.0;
  std::uint64_t seed = 0;    // stream seed of the accepted attempt
  int regenerations = 0;     // discarded trajectories before this one
};

/// Generate until the interim trigger and external cohort are feasible.
/// Each retry draws a fresh counter-derived stream.
inline SimulatedDataset simulate_dataset(const ScenarioConfig& config, double hr,
                                         std::uint64_t hr_index,
                                         std::uint64_t sim_index,
                                         int max_attempts = 1000) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const std::uint64_t seed =
        stream_seed(config.base_seed, hr_index, sim_index,
                    static_cast<std::uint64_t>(attempt));
    RngStream rng(seed);
    Trial trial = generate_trial(config, hr, rng);
    double interim_time = 0.0;
    try {
      interim_time = find_interim_time(trial, config);
    } catch (const TriggerNeverReached&) {
      continue;
    }
    InterimSnapshot snap = apply_interim(trial, interim_time);
    ExternalCohort ext;
    try {
      ext = generate_external(snap, config, trial.censor_prob, rng);
    } catch (const ExternalSizeInfeasible&) {
      continue;
    }
    append_external(snap, ext);
    SimulatedDataset out;
    out.snapshot = std::move(snap);
    out.censor_prob = trial.censor_prob;
    out.seed = seed;
    out.regenerations = attempt;
    return out;
  }
  throw TriggerNeverReached("simulation never reached a feasible interim after " +
                            std::to_string(max_attempts) + " attempts");
}

}  // namespace enee
