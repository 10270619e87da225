#pragma once

// Shared test fixtures. The frozen expected values were computed with the
// independent oracles in oracles.hpp (grid + golden-section maximization of
// the Efron partial likelihood, information by central finite differences).

#include <vector>

#include "enee/subject.hpp"

namespace fixtures {

/// Six subjects, three per arm, distinct event/censoring times.
/// Oracle values: beta = -0.8341152519, variance = 1.5127128306.
inline std::vector<enee::Subject> cox6() {
  using enee::Cohort;
  using enee::Subject;
  return {
      Subject(0, Cohort::trial_control, 0.0, 2.0, true),
      Subject(1, Cohort::trial_control, 0.0, 4.0, true),
      Subject(2, Cohort::trial_control, 0.0, 6.0, false),
      Subject(3, Cohort::trial_experimental, 0.0, 3.0, true),
      Subject(4, Cohort::trial_experimental, 0.0, 5.0, false),
      Subject(5, Cohort::trial_experimental, 0.0, 7.0, true),
  };
}

inline constexpr double kCox6Beta = -0.8341152519;
inline constexpr double kCox6Variance = 1.5127128306;

/// Ten trial subjects frozen at a synthetic interim (5 per arm, 3 events
/// each). d_C = 3, so d_eff = 3 puts weight 2 on every control subject.
/// Oracle weighted Cox precision at d_eff = 3: 1.9756559055.
inline enee::InterimSnapshot snapshot10() {
  using enee::Cohort;
  using enee::Subject;
  enee::InterimSnapshot snap;
  snap.interim_time = 10.0;
  snap.subjects = {
      Subject(0, Cohort::trial_control, 0.0, 1.5, true),
      Subject(1, Cohort::trial_control, 0.5, 2.5, true),
      Subject(2, Cohort::trial_control, 1.0, 4.5, true),
      Subject(3, Cohort::trial_control, 1.5, 6.0, false),
      Subject(4, Cohort::trial_control, 2.0, 8.0, false),
      Subject(5, Cohort::trial_experimental, 0.0, 2.0, true),
      Subject(6, Cohort::trial_experimental, 0.5, 3.5, true),
      Subject(7, Cohort::trial_experimental, 1.0, 5.0, false),
      Subject(8, Cohort::trial_experimental, 1.5, 7.0, true),
      Subject(9, Cohort::trial_experimental, 2.0, 9.0, false),
  };
  snap.n_C = 5;
  snap.n_E = 5;
  snap.d_C = 3;
  snap.d_E = 3;
  snap.kappa = 3.0 / 5.0;
  snap.max_followup = 9.0;
  return snap;
}

inline constexpr double kSnapshot10WeightedPrecision = 1.9756559055;

/// Monotone-likelihood dataset: every control event precedes all
/// experimental follow-up.
inline std::vector<enee::Subject> separated() {
  using enee::Cohort;
  using enee::Subject;
  return {
      Subject(0, Cohort::trial_control, 0.0, 1.0, true),
      Subject(1, Cohort::trial_control, 0.0, 2.0, true),
      Subject(2, Cohort::trial_control, 0.0, 3.0, true),
      Subject(3, Cohort::trial_experimental, 0.0, 10.0, true),
      Subject(4, Cohort::trial_experimental, 0.0, 11.0, true),
      Subject(5, Cohort::trial_experimental, 0.0, 12.0, true),
  };
}

}  // namespace fixtures
