#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "enee/errors.hpp"
#include "enee/model_fit.hpp"
#include "enee/subject.hpp"

namespace enee {

/// Closed-form two-arm exponential fit with case weights.
///
/// Per arm a: D_a = sum of weight*event_flag, T_a = sum of weight*followup.
/// log HR = log((D_E/T_E) / (D_C/T_C)); the Fisher information of a log rate
/// is its weighted event mass, so the log-HR precision is
/// D_C*D_E / (D_C + D_E).
inline ModelFit fit_exponential(
    const std::vector<Subject>& subjects,
    const std::function<Arm(Cohort)>& arm_of = default_arm) {
  double events[2] = {0.0, 0.0};    // weighted event mass per arm
  double exposure[2] = {0.0, 0.0};  // weighted follow-up per arm
  int count[2] = {0, 0};
  for (const Subject& s : subjects) {
    const int a = arm_of(s.cohort) == Arm::control ? 0 : 1;
    ++count[a];
    exposure[a] += s.case_weight * s.followup_time;
    if (s.event_flag) events[a] += s.case_weight;
  }
  if (count[0] == 0) throw EmptyArm("control arm has no subjects");
  if (count[1] == 0) throw EmptyArm("experimental arm has no subjects");
  if (!(events[0] > 0.0)) throw NoEventsInArm("no weighted events in control arm");
  if (!(events[1] > 0.0)) throw NoEventsInArm("no weighted events in experimental arm");

  ModelFit fit;
  fit.model_kind = ModelKind::exponential;
  fit.log_hr = std::log(events[1] / exposure[1]) - std::log(events[0] / exposure[0]);
  fit.precision = events[0] * events[1] / (events[0] + events[1]);
  fit.variance = 1.0 / fit.precision;
  fit.converged = true;
  fit.iterations = 0;
  return fit;
}

}  // namespace enee
