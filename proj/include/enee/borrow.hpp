#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enee/brent.hpp"
#include "enee/cox_model.hpp"
#include "enee/errors.hpp"
#include "enee/subject.hpp"

namespace enee {

enum class BorrowMethod { exact_exponential, ehss_events, ehss_patients, generalized };

enum class Stability { stable, unstable_derivative, unstable_no_root, not_applicable };

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable_derivative: return "unstable-derivative";
    case Stability::unstable_no_root: return "unstable-no-root";
    case Stability::not_applicable: return "not-applicable";
  }
  return "?";
}

inline const char* to_string(BorrowMethod m) {
  switch (m) {
    case BorrowMethod::exact_exponential: return "exact-exponential";
    case BorrowMethod::ehss_events: return "ehss-events";
    case BorrowMethod::ehss_patients: return "ehss-patients";
    case BorrowMethod::generalized: return "generalized";
  }
  return "?";
}

/// An estimate of the number of external events effectively borrowed,
/// together with the method that produced it and, for the generalized
/// estimator, the derivative-based stability diagnostic.
struct BorrowEstimate {
  BorrowMethod method = BorrowMethod::generalized;
  std::optional<double> d_eff_hat;
  std::optional<double> derivative_at_solution;
  Stability stability = Stability::not_applicable;
  std::optional<double> effective_patients;
};

/// Root-search and diagnostic settings for the generalized estimator.
struct SolverConfig {
  double search_lower_offset = 0.001;        // added to -d_C
  double search_upper = 1000.0;              // upper end of the search interval
  double fd_epsilon = 0.0001;                // central-difference step
  double derivative_cutoff = std::exp(-3.0); // below this: unstable
  double root_tolerance = 1e-8;              // on |psi|

  void validate() const {
    if (!(search_lower_offset > 0.0)) throw InvalidConfig("search_lower_offset must be > 0");
    if (!(search_upper > 0.0)) throw InvalidConfig("search_upper must be > 0");
    if (!(fd_epsilon > 0.0)) throw InvalidConfig("fd_epsilon must be > 0");
    if (!(derivative_cutoff > 0.0)) throw InvalidConfig("derivative_cutoff must be > 0");
    if (!(root_tolerance > 0.0)) throw InvalidConfig("root_tolerance must be > 0");
  }
};

/// Exact number of additional control-arm events matching the hybrid
/// precision, for unadjusted exponential models:
/// (tau2_hyb*(d_C+d_E) - d_C*d_E) / (d_E - tau2_hyb).
inline double d_eff_exact(double tau2_hyb, int d_C, int d_E) {
  if (!(tau2_hyb > 0.0)) throw InvalidConfig("tau2_hyb must be positive");
  if (d_C < 1 || d_E < 1) throw InvalidConfig("d_C and d_E must be >= 1");
  const double dc = d_C, de = d_E;
  if (tau2_hyb >= de)
    throw PrecisionAtOrAbovePole(
        "no finite number of control events achieves precision " +
        std::to_string(tau2_hyb) + " with d_E = " + std::to_string(d_E));
  return (tau2_hyb * (dc + de) - dc * de) / (de - tau2_hyb);
}

/// Forward map of d_eff_exact: the hybrid precision implied by d_eff extra
/// control events under the exponential precision formula.
inline double exponential_hybrid_precision(double d_eff, int d_C, int d_E) {
  const double dc = d_C, de = d_E;
  return (dc + d_eff) * de / (dc + de + d_eff);
}

/// Linear approximation on the events scale:
/// (d_C + d_E) * (tau2_hyb/tau2_ref - 1).
inline double ehss_events(double tau2_hyb, double tau2_ref, int d_C, int d_E) {
  if (!(tau2_hyb > 0.0) || !(tau2_ref > 0.0))
    throw InvalidConfig("precisions must be positive");
  if (d_C < 1 || d_E < 1) throw InvalidConfig("d_C and d_E must be >= 1");
  return (d_C + d_E) * (tau2_hyb / tau2_ref - 1.0);
}

/// Linear approximation on the patients scale:
/// (n_C + n_E) * (tau2_hyb/tau2_ref - 1).
inline double ehss_patients(double tau2_hyb, double tau2_ref, int n_C, int n_E) {
  if (!(tau2_hyb > 0.0) || !(tau2_ref > 0.0))
    throw InvalidConfig("precisions must be positive");
  if (n_C < 1 || n_E < 1) throw InvalidConfig("n_C and n_E must be >= 1");
  return (n_C + n_E) * (tau2_hyb / tau2_ref - 1.0);
}

/// Convert effective events to effective patients using kappa, the
/// proportion of enrolled trial controls with an observed event at interim.
inline double events_to_patients(double d_eff, double kappa) {
  if (!(kappa > 0.0)) throw KappaZero("kappa must be > 0");
  return d_eff / kappa;
}

/// Precision of the reference model refit to the trial data with a common
/// case weight w = d_eff/d_C + 1 on every control subject and weight 1 on
/// every experimental subject. External subjects are excluded. Fit failures
/// surface as EvaluationFailed.
inline double weighted_reference_precision(const InterimSnapshot& snapshot,
                                           double d_eff, ModelKind kind) {
  if (snapshot.d_C < 1)
    throw InvalidConfig("snapshot has no control events");
  const double w = d_eff / snapshot.d_C + 1.0;
  if (!(w > 0.0))
    throw InvalidConfig("d_eff must exceed -d_C so the control weight is positive");
  std::vector<Subject> weighted;
  weighted.reserve(snapshot.subjects.size());
  for (const Subject& s : snapshot.subjects) {
    if (s.cohort == Cohort::external) continue;
    Subject t = s;
    t.case_weight = s.cohort == Cohort::trial_control ? w : 1.0;
    weighted.push_back(t);
  }
  try {
    return fit_model(kind, weighted).precision;
  } catch (const Error& e) {
    throw EvaluationFailed(std::string("reference refit at d_eff = ") +
                           std::to_string(d_eff) + " failed: " + e.what());
  }
}

/// Central finite difference (f(at+eps) - f(at-eps)) / (2 eps).
inline double derivative_diagnostic(const std::function<double(double)>& precision_fn,
                                    double at, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidConfig("epsilon must be > 0");
  try {
    return (precision_fn(at + epsilon) - precision_fn(at - epsilon)) /
           (2.0 * epsilon);
  } catch (const EvaluationFailed&) {
    throw;
  } catch (const Error& e) {
    throw EvaluationFailed(std::string("derivative evaluation failed: ") + e.what());
  }
}

/// Generalized estimator: solve psi(d_eff) = tau2_ref(d_eff) - tau2_hyb = 0
/// over (-d_C + search_lower_offset, search_upper) with a bracketing root
/// finder, then diagnose stability by the central-finite-difference
/// derivative of tau2_ref at the solution.
///
/// No sign change over the interval, or a solver failure, yields
/// stability = unstable-no-root with no estimate. Model-fit failures during
/// the search propagate as EvaluationFailed.
inline BorrowEstimate d_eff_generalized(const InterimSnapshot& snapshot,
                                        double tau2_hyb, ModelKind kind,
                                        const SolverConfig& solver = {}) {
  solver.validate();
  if (!(tau2_hyb > 0.0)) throw InvalidConfig("tau2_hyb must be positive");
  if (snapshot.d_C < 1 || snapshot.d_E < 1)
    throw InvalidConfig("snapshot needs at least one event per arm");

  // Memoize refits; the derivative step revisits points near the root.
  std::map<double, double> cache;
  auto tau2_ref_at = [&](double d_eff) {
    auto it = cache.find(d_eff);
    if (it != cache.end()) return it->second;
    const double v = weighted_reference_precision(snapshot, d_eff, kind);
    cache.emplace(d_eff, v);
    return v;
  };
  auto psi = [&](double d_eff) { return tau2_ref_at(d_eff) - tau2_hyb; };

  BorrowEstimate out;
  out.method = BorrowMethod::generalized;

  const double lo = -static_cast<double>(snapshot.d_C) + solver.search_lower_offset;
  const double hi = solver.search_upper;
  const double psi_lo = psi(lo);
  const double psi_hi = psi(hi);
  if ((psi_lo > 0.0) == (psi_hi > 0.0) && psi_lo != 0.0 && psi_hi != 0.0) {
    out.stability = Stability::unstable_no_root;
    return out;
  }
  const std::optional<double> root =
      brent_root(psi, lo, hi, psi_lo, psi_hi, solver.root_tolerance);
  if (!root || std::abs(psi(*root)) >= solver.root_tolerance) {
    out.stability = Stability::unstable_no_root;
    return out;
  }

  out.d_eff_hat = *root;
  out.derivative_at_solution =
      derivative_diagnostic(tau2_ref_at, *root, solver.fd_epsilon);
  out.stability = *out.derivative_at_solution >= solver.derivative_cutoff
                      ? Stability::stable
                      : Stability::unstable_derivative;
  return out;
}

}  // namespace enee
