#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "enee/borrow.hpp"
#include "enee/errors.hpp"

namespace enee {

enum class Scenario { exponential, weibull };

inline const char* to_string(Scenario s) {
  return s == Scenario::exponential ? "exponential" : "weibull";
}

inline Scenario scenario_from_string(const std::string& s) {
  if (s == "exponential") return Scenario::exponential;
  if (s == "weibull") return Scenario::weibull;
  throw InvalidConfig("unknown scenario: " + s);
}

inline Stability stability_from_string(const std::string& s) {
  if (s == "stable") return Stability::stable;
  if (s == "unstable-derivative") return Stability::unstable_derivative;
  if (s == "unstable-no-root") return Stability::unstable_no_root;
  if (s == "not-applicable") return Stability::not_applicable;
  throw InvalidConfig("unknown stability: " + s);
}

/// One simulated trial's truth (d_ext) and every competing estimate of it.
struct SimulationRecord {
  Scenario scenario = Scenario::exponential;
  double hr = 1.0;
  int sim_index = 0;
  std::uint64_t base_seed = 0;
  std::uint64_t stream_seed = 0;
  int n_C = 0, n_E = 0, d_C = 0, d_E = 0, d_ext = 0;
  double kappa = 0.0;
  double tau2_ref = 0.0, tau2_hyb = 0.0;
  std::optional<double> estimate_exact;
  double estimate_ehss_events = 0.0;
  double estimate_ehss_patients = 0.0;
  std::optional<double> estimate_generalized;
  std::optional<double> derivative;
  Stability stability = Stability::not_applicable;
  std::optional<double> effective_patients_generalized;
  int regeneration_count = 0;
};

/// One row of the bias / standard-deviation summary, stratified by the
/// stability of the generalized estimate.
struct SummaryRow {
  std::string stability_stratum;  // "stable" | "unstable"
  double hr = 0.0;
  std::string method;             // "generalized" | "ehss-events" | "exact-exponential"
  int n_sims = 0;
  double bias = 0.0;              // mean(estimate - d_ext)
  double sd = 0.0;                // sample sd of (estimate - d_ext)
};

}  // namespace enee
