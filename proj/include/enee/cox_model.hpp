#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "enee/errors.hpp"
#include "enee/model_fit.hpp"
#include "enee/subject.hpp"

namespace enee {

namespace detail {

struct CoxRow {
  double time;
  double weight;
  double z;  // arm indicator: 1 = experimental, 0 = control
  bool event;
  int id;
};

inline std::vector<CoxRow> cox_rows(
    const std::vector<Subject>& subjects,
    const std::function<Arm(Cohort)>& arm_of) {
  std::vector<CoxRow> rows;
  rows.reserve(subjects.size());
  int events[2] = {0, 0};
  int count[2] = {0, 0};
  for (const Subject& s : subjects) {
    const int a = arm_of(s.cohort) == Arm::control ? 0 : 1;
    ++count[a];
    if (s.event_flag) ++events[a];
    rows.push_back({s.followup_time, s.case_weight, static_cast<double>(a),
                    s.event_flag, s.id});
  }
  if (count[0] == 0) throw EmptyArm("control arm has no subjects");
  if (count[1] == 0) throw EmptyArm("experimental arm has no subjects");
  if (events[0] == 0) throw NoEventsInArm("no events in control arm");
  if (events[1] == 0) throw NoEventsInArm("no events in experimental arm");
  // Largest time first; ties grouped, ordered by id for determinism.
  std::sort(rows.begin(), rows.end(), [](const CoxRow& a, const CoxRow& b) {
    if (a.time != b.time) return a.time > b.time;
    return a.id < b.id;
  });
  return rows;
}

struct CoxDerivatives {
  double loglik;
  double score;
  double info;
};

/// Weighted log partial likelihood, score and observed information at beta
/// for a single binary covariate, Efron tie handling.
///
/// At a death time with tied death set D (size m, weight sum W_D) and risk
/// set R, each of the m Efron terms uses denominator S0(R) - (l/m) S0(D)
/// and carries weight W_D/m.
inline CoxDerivatives cox_derivatives(const std::vector<CoxRow>& rows,
                                      double beta) {
  double loglik = 0.0, score = 0.0, info = 0.0;
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;  // risk-set sums of w*r*z^k
  const std::size_t n = rows.size();
  std::size_t i = 0;
  while (i < n) {
    const double dtime = rows[i].time;
    int ndead = 0;
    double deadwt = 0.0, d0 = 0.0, d1 = 0.0, d2 = 0.0;
    for (; i < n && rows[i].time == dtime; ++i) {
      const CoxRow& row = rows[i];
      const double r = row.weight * std::exp(beta * row.z);
      s0 += r;
      s1 += r * row.z;
      s2 += r * row.z * row.z;
      if (row.event) {
        ++ndead;
        deadwt += row.weight;
        d0 += r;
        d1 += r * row.z;
        d2 += r * row.z * row.z;
        loglik += row.weight * beta * row.z;
        score += row.weight * row.z;
      }
    }
    if (ndead == 0) continue;
    const double wt = deadwt / ndead;
    for (int l = 0; l < ndead; ++l) {
      const double frac = static_cast<double>(l) / ndead;
      const double denom = s0 - frac * d0;
      const double mean = (s1 - frac * d1) / denom;
      loglik -= wt * std::log(denom);
      score -= wt * mean;
      info += wt * ((s2 - frac * d2) / denom - mean * mean);
    }
  }
  return {loglik, score, info};
}

}  // namespace detail

/// Evaluate the case-weighted Cox log partial likelihood and its first two
/// derivatives at beta (Efron ties, single arm indicator).
inline detail::CoxDerivatives cox_partial_loglik(
    const std::vector<Subject>& subjects, double beta,
    const std::function<Arm(Cohort)>& arm_of = default_arm) {
  return detail::cox_derivatives(detail::cox_rows(subjects, arm_of), beta);
}

/// Newton-Raphson fit of the case-weighted Cox partial likelihood with a
/// single binary arm covariate and Efron tie handling. The step is halved
/// whenever the log partial likelihood decreases; convergence is declared
/// when |delta beta| < tol.
inline ModelFit fit_cox(const std::vector<Subject>& subjects,
                        const std::function<Arm(Cohort)>& arm_of = default_arm,
                        double tol = 1e-9, int max_iterations = 25) {
  const std::vector<detail::CoxRow> rows = detail::cox_rows(subjects, arm_of);
  constexpr double kBetaBound = 40.0;  // |beta| beyond this: monotone likelihood

  double beta = 0.0;
  detail::CoxDerivatives cur = detail::cox_derivatives(rows, beta);
  int iter = 0;
  bool converged = false;
  bool steps_one_sided = true;
  double first_step_sign = 0.0;
  while (iter < max_iterations) {
    if (!(cur.info > 0.0) || !std::isfinite(cur.info))
      throw Separation("no interior maximizer: observed information is not positive");
    double step = cur.score / cur.info;
    if (std::abs(step) < tol) {
      // Newton is locally contracting here; take the step as-is.
      beta += step;
      cur = detail::cox_derivatives(rows, beta);
      ++iter;
      converged = true;
      break;
    }
    double beta_new = beta + step;
    detail::CoxDerivatives next = detail::cox_derivatives(rows, beta_new);
    // Slack keeps floating-point noise in the loglik comparison from
    // triggering halvings once the iterates are near the maximizer.
    const double slack = 1e-10 * (std::abs(cur.loglik) + 1.0);
    int halvings = 0;
    while ((!std::isfinite(next.loglik) || next.loglik < cur.loglik - slack) &&
           halvings < 30) {
      step *= 0.5;
      beta_new = beta + step;
      next = detail::cox_derivatives(rows, beta_new);
      ++halvings;
    }
    if (first_step_sign == 0.0) first_step_sign = step < 0.0 ? -1.0 : 1.0;
    else if (step * first_step_sign < 0.0) steps_one_sided = false;
    beta = beta_new;
    cur = next;
    ++iter;
    if (std::abs(beta) > kBetaBound)
      throw Separation("no interior maximizer: likelihood monotone in beta");
  }
  if (!converged) {
    // A one-sided march that is still far from the origin at the cap is the
    // signature of a monotone likelihood, not of slow convergence.
    if (steps_one_sided && std::abs(beta) > 10.0)
      throw Separation("no interior maximizer: likelihood monotone in beta");
    throw NonConvergence("Cox Newton iteration cap reached");
  }
  if (!(cur.info > 0.0) || !std::isfinite(cur.info))
    throw Separation("no interior maximizer: observed information is not positive");

  ModelFit fit;
  fit.model_kind = ModelKind::cox;
  fit.log_hr = beta;
  fit.precision = cur.info;
  fit.variance = 1.0 / cur.info;
  fit.converged = true;
  fit.iterations = iter;
  return fit;
}

/// Fit the requested model kind.
inline ModelFit fit_model(ModelKind kind, const std::vector<Subject>& subjects,
                          const std::function<Arm(Cohort)>& arm_of = default_arm);

}  // namespace enee

#include "enee/exponential_model.hpp"

namespace enee {

inline ModelFit fit_model(ModelKind kind, const std::vector<Subject>& subjects,
                          const std::function<Arm(Cohort)>& arm_of) {
  return kind == ModelKind::exponential ? fit_exponential(subjects, arm_of)
                                        : fit_cox(subjects, arm_of);
}

}  // namespace enee
