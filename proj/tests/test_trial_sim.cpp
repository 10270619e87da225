#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "enee/rng.hpp"
#include "enee/trial_sim.hpp"

using namespace enee;

TEST_CASE("enrollment is linear at two subjects per month") {
  ScenarioConfig config;
  RngStream rng(1);
  const Trial trial = generate_trial(config, 1.0, rng);
  CHECK(trial.draws[0].enrollment_time == Catch::Approx(0.0).margin(1e-15));
  CHECK(trial.draws[1].enrollment_time == Catch::Approx(0.5));
  CHECK(trial.draws[2].enrollment_time == Catch::Approx(1.0));
  CHECK(trial.draws[3].enrollment_time == Catch::Approx(1.5));
  // Deterministic 1:1 alternation.
  CHECK(trial.draws[0].cohort == Cohort::trial_control);
  CHECK(trial.draws[1].cohort == Cohort::trial_experimental);
  CHECK(trial.size >= config.trial_size_min);
  CHECK(trial.size <= config.trial_size_max);
  CHECK(trial.censor_prob >= config.censor_prob_min);
  CHECK(trial.censor_prob <= config.censor_prob_max);
}

TEST_CASE("interim event threshold: ceiling arithmetic") {
  ScenarioConfig config;
  CHECK(interim_event_threshold(config, 60) == 20);   // ceil(19.8)
  CHECK(interim_event_threshold(config, 100) == 33);  // 0.33*100 is not 34
  CHECK(interim_event_threshold(config, 61) == 21);   // ceil(20.13)
}

namespace {

Trial synthetic_trial(int n) {
  // Hand-built trajectories: controls event at 1, 2, 3, ... months after
  // enrollment; experimentals at 1.25, 2.25, ...; censoring far away.
  Trial trial;
  trial.size = n;
  trial.censor_prob = 0.05;
  for (int i = 0; i < n; ++i) {
    SubjectDraw d;
    d.id = i;
    d.cohort = i % 2 == 0 ? Cohort::trial_control : Cohort::trial_experimental;
    d.enrollment_time = i / 2.0;
    d.event_time = (i / 2 + 1) + (i % 2 == 0 ? 0.0 : 0.25);
    d.censor_time = 1e6;
    trial.draws.push_back(d);
  }
  return trial;
}

}  // namespace

TEST_CASE("find_interim_time waits for both trigger conditions") {
  ScenarioConfig config;
  Trial trial = synthetic_trial(60);
  // Event calendar times: control i -> 1.5*i + 1, experimental -> 1.5*i + 1.75
  // (interleaved), so events alternate between the arms.
  const double interim = find_interim_time(trial, config);
  // Threshold is 20 total events and 10 per arm; with alternating events the
  // 20th event is the 10th experimental one.
  int total = 0, control = 0, experimental = 0;
  for (const SubjectDraw& d : trial.draws) {
    const double cal = d.enrollment_time + d.event_time;
    if (d.event_time <= d.censor_time && cal <= interim) {
      ++total;
      (d.cohort == Cohort::trial_control ? control : experimental)++;
    }
  }
  CHECK(total >= 20);
  CHECK(control >= 10);
  CHECK(experimental >= 10);

  // Starve the experimental arm: interim must wait for its 10th event even
  // though 20 total events arrive earlier.
  Trial skewed = synthetic_trial(60);
  for (SubjectDraw& d : skewed.draws)
    if (d.cohort == Cohort::trial_experimental)
      d.event_time += 40.0;  // experimental events arrive much later
  const double interim_skewed = find_interim_time(skewed, config);
  int exp_events = 0;
  for (const SubjectDraw& d : skewed.draws)
    if (d.cohort == Cohort::trial_experimental &&
        d.enrollment_time + d.event_time <= interim_skewed)
      ++exp_events;
  CHECK(exp_events == 10);
  CHECK(interim_skewed > interim);
}

TEST_CASE("find_interim_time: trigger never reached") {
  ScenarioConfig config;
  Trial trial = synthetic_trial(60);
  for (SubjectDraw& d : trial.draws) d.censor_time = 0.5;  // censor everyone
  CHECK_THROWS_AS(find_interim_time(trial, config), TriggerNeverReached);
}

TEST_CASE("apply_interim: administrative censoring and exclusion") {
  Trial trial;
  trial.size = 4;
  trial.censor_prob = 0.05;
  trial.draws = {
      {0, Cohort::trial_control, 0.0, 3.0, 100.0},        // event inside window
      {1, Cohort::trial_experimental, 0.0, 8.0, 100.0},   // event after interim
      {2, Cohort::trial_control, 2.0, 9.0, 4.0},          // censored first
      {3, Cohort::trial_experimental, 7.0, 1.0, 100.0},   // enrolled after interim
  };
  const InterimSnapshot snap = apply_interim(trial, 6.0);
  REQUIRE(snap.subjects.size() == 3);
  CHECK(snap.subjects[0].event_flag);
  CHECK(snap.subjects[0].followup_time == Catch::Approx(3.0));
  CHECK_FALSE(snap.subjects[1].event_flag);
  CHECK(snap.subjects[1].followup_time == Catch::Approx(6.0));
  CHECK_FALSE(snap.subjects[2].event_flag);
  CHECK(snap.subjects[2].followup_time == Catch::Approx(4.0));
  CHECK(snap.n_C == 2);
  CHECK(snap.n_E == 1);
  CHECK(snap.d_C == 1);
  CHECK(snap.d_E == 0);
  CHECK(snap.kappa == Catch::Approx(0.5));
  CHECK(snap.max_followup == Catch::Approx(6.0));
}

TEST_CASE("generate_external: follow-up capped at the trial maximum") {
  InterimSnapshot snap;
  snap.interim_time = 6.0;
  snap.max_followup = 6.0;
  for (int i = 0; i < 30; ++i)
    snap.subjects.push_back(Subject(i, Cohort::trial_control, 0.0, 5.0, true));
  snap.n_C = 30;
  snap.d_C = 30;
  snap.n_E = 1;
  snap.subjects.push_back(Subject(30, Cohort::trial_experimental, 0.0, 5.0, true));
  snap.d_E = 1;
  snap.kappa = 1.0;

  ScenarioConfig config;
  RngStream rng(5);
  const ExternalCohort ext = generate_external(snap, config, 0.07, rng);
  CHECK(ext.subjects.size() >= 10);
  CHECK(ext.subjects.size() <= 30);
  int events = 0;
  for (const Subject& s : ext.subjects) {
    CHECK(s.cohort == Cohort::external);
    CHECK(s.enrollment_time == 0.0);
    CHECK(s.followup_time <= snap.max_followup);
    if (s.event_flag) ++events;
  }
  CHECK(ext.d_ext == events);

  InterimSnapshot small = snap;
  small.n_C = 5;
  CHECK_THROWS_AS(generate_external(small, config, 0.07, rng),
                  ExternalSizeInfeasible);
}

TEST_CASE("snapshot invariants hold across generated datasets", "[property]") {
  for (double shape : {1.0, 1.15}) {
    ScenarioConfig config;
    config.weibull_shape = shape;
    for (int sim = 0; sim < 100; ++sim) {
      const double hr = config.hazard_ratios[sim % config.hazard_ratios.size()];
      RngStream rng(stream_seed(config.base_seed, sim % 4, sim));
      const Trial trial = generate_trial(config, hr, rng);
      double interim_time = 0.0;
      try {
        interim_time = find_interim_time(trial, config);
      } catch (const TriggerNeverReached&) {
        continue;  // regeneration path, exercised elsewhere
      }
      InterimSnapshot snap = apply_interim(trial, interim_time);
      const ExternalCohort ext =
          generate_external(snap, config, trial.censor_prob, rng);
      append_external(snap, ext);

      REQUIRE(snap.d_C <= snap.n_C);
      REQUIRE(snap.d_E <= snap.n_E);
      REQUIRE(snap.d_C >= config.min_events_per_arm);
      REQUIRE(snap.d_E >= config.min_events_per_arm);
      REQUIRE(snap.d_C + snap.d_E >=
              interim_event_threshold(config, trial.size));
      REQUIRE(snap.kappa > 0.0);
      REQUIRE(snap.kappa <= 1.0);
      int d_ext = 0;
      for (const Subject& s : snap.subjects) {
        REQUIRE(s.followup_time > 0.0);
        REQUIRE(s.followup_time <= snap.max_followup + 1e-12);
        if (s.cohort == Cohort::external && s.event_flag) ++d_ext;
      }
      REQUIRE(d_ext == snap.d_ext);
    }
  }
}

TEST_CASE("identical stream seeds reproduce identical trajectories") {
  ScenarioConfig config;
  config.weibull_shape = 1.15;
  RngStream a(stream_seed(config.base_seed, 2, 17));
  RngStream b(stream_seed(config.base_seed, 2, 17));
  const Trial ta = generate_trial(config, 0.6, a);
  const Trial tb = generate_trial(config, 0.6, b);
  REQUIRE(ta.size == tb.size);
  REQUIRE(ta.censor_prob == tb.censor_prob);
  for (std::size_t i = 0; i < ta.draws.size(); ++i) {
    REQUIRE(ta.draws[i].event_time == tb.draws[i].event_time);
    REQUIRE(ta.draws[i].censor_time == tb.draws[i].censor_time);
  }
  // Different sim index gives a different stream.
  RngStream c(stream_seed(config.base_seed, 2, 18));
  const Trial tc = generate_trial(config, 0.6, c);
  CHECK(ta.draws[0].event_time != tc.draws[0].event_time);
}

TEST_CASE("exponential special case: mean event time near 12 months",
          "[property]") {
  ScenarioConfig config;
  RngStream rng(123);
  double sum = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) sum += rng.weibull(1.0, config.scale());
  CHECK(std::abs(sum / n - 12.0) < 0.5);
}

TEST_CASE("censoring calibration: censor-first fraction matches p",
          "[property]") {
  ScenarioConfig config;
  RngStream rng(321);
  const double p = 0.08;
  const double rate = censoring_rate(config, p);
  const int n = 10000;
  int censored_first = 0;
  for (int i = 0; i < n; ++i) {
    const double event = rng.weibull(1.0, config.scale());
    const double censor = rng.exponential(rate);
    if (censor < event) ++censored_first;
  }
  CHECK(std::abs(static_cast<double>(censored_first) / n - p) < 0.02);
}

TEST_CASE("uniform_int covers its range exactly") {
  RngStream rng(5);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t v = rng.uniform_int(3, 9);
    REQUIRE(v >= 3);
    REQUIRE(v <= 9);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  CHECK(rng.uniform_int(4, 4) == 4);
}
