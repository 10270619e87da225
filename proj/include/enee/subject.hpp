#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "enee/errors.hpp"

namespace enee {

enum class Cohort { trial_control, trial_experimental, external };

enum class Arm { control, experimental };

/// Default analysis mapping: external subjects are analyzed in the control
/// stratum.
inline Arm default_arm(Cohort c) {
  return c == Cohort::trial_experimental ? Arm::experimental : Arm::control;
}

inline const char* to_string(Cohort c) {
  switch (c) {
    case Cohort::trial_control: return "trial-control";
    case Cohort::trial_experimental: return "trial-experimental";
    case Cohort::external: return "external";
  }
  return "?";
}

/// One person's analysis row: cohort label, enrollment time (calendar
/// months), follow-up from the subject's own index date, event status and
/// case weight. Invalid rows are rejected at construction.
struct Subject {
  int id = 0;
  Cohort cohort = Cohort::trial_control;
  double enrollment_time = 0.0;  // calendar months, 0 for external
  double followup_time = 0.0;    // months from index date, > 0
  bool event_flag = false;
  double case_weight = 1.0;

  Subject() = default;

  Subject(int id_, Cohort cohort_, double enrollment_time_,
          double followup_time_, bool event_flag_, double case_weight_ = 1.0)
      : id(id_),
        cohort(cohort_),
        enrollment_time(enrollment_time_),
        followup_time(followup_time_),
        event_flag(event_flag_),
        case_weight(case_weight_) {
    if (!(followup_time > 0.0))
      throw InvalidSubject("subject " + std::to_string(id) +
                           ": followup_time must be > 0");
    if (!(case_weight > 0.0))
      throw InvalidSubject("subject " + std::to_string(id) +
                           ": case_weight must be > 0");
    if (!(enrollment_time >= 0.0))
      throw InvalidSubject("subject " + std::to_string(id) +
                           ": enrollment_time must be >= 0");
    if (cohort == Cohort::external && enrollment_time != 0.0)
      throw InvalidSubject("subject " + std::to_string(id) +
                           ": external subjects have enrollment_time = 0");
  }
};

/// Analysis dataset frozen at the interim: trial subjects censored at the
/// interim time plus the external cohort, with the derived counts used by
/// the borrowing estimators.
struct InterimSnapshot {
  double interim_time = 0.0;      // calendar months
  std::vector<Subject> subjects;  // trial + external analysis set
  int n_C = 0;                    // trial controls enrolled at interim
  int n_E = 0;                    // trial experimentals enrolled at interim
  int d_C = 0;                    // trial control events at interim
  int d_E = 0;                    // trial experimental events at interim
  int d_ext = 0;                  // external events (simulation ground truth)
  double kappa = 0.0;             // d_C / n_C
  double max_followup = 0.0;      // max trial follow-up duration at interim

  std::vector<Subject> trial_subjects() const {
    std::vector<Subject> out;
    out.reserve(subjects.size());
    std::copy_if(subjects.begin(), subjects.end(), std::back_inserter(out),
                 [](const Subject& s) { return s.cohort != Cohort::external; });
    return out;
  }
};

}  // namespace enee
