#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "enee/borrow.hpp"
#include "enee/record.hpp"
#include "enee/toml_lite.hpp"
#include "enee/trial_sim.hpp"

namespace enee {

/// Scenario defaults: the Weibull scenario turns on the increasing-hazard
/// shape, everything else is shared.
inline ScenarioConfig default_config(Scenario scenario) {
  ScenarioConfig config;
  config.weibull_shape = scenario == Scenario::weibull ? 1.15 : 1.0;
  return config;
}

/// Apply a parsed TOML table onto the scenario and solver settings.
/// Keys mirror the field names; solver settings live under [solver].
/// Unknown keys are rejected so typos fail loudly.
inline void apply_config(const toml::Table& table, ScenarioConfig& config,
                         SolverConfig& solver) {
  static const std::set<std::string> known = {
      "hazard_ratios", "sims_per_hr", "trial_size_range", "censor_prob_range",
      "interim_event_fraction", "min_events_per_arm", "enrollment_rate",
      "control_hazard", "weibull_shape", "external_size_min", "base_seed",
      "solver.search_lower_offset", "solver.search_upper", "solver.fd_epsilon",
      "solver.derivative_cutoff", "solver.root_tolerance"};
  for (const auto& [key, value] : table) {
    if (!known.count(key)) throw InvalidConfig("unknown config key '" + key + "'");
    if (key == "hazard_ratios") {
      config.hazard_ratios = value.as_double_array(key);
    } else if (key == "sims_per_hr") {
      config.sims_per_hr = static_cast<int>(value.as_int(key));
    } else if (key == "trial_size_range") {
      const auto range = value.as_int_array(key);
      if (range.size() != 2) throw InvalidConfig("trial_size_range must be [min, max]");
      config.trial_size_min = static_cast<int>(range[0]);
      config.trial_size_max = static_cast<int>(range[1]);
    } else if (key == "censor_prob_range") {
      const auto range = value.as_double_array(key);
      if (range.size() != 2) throw InvalidConfig("censor_prob_range must be [min, max]");
      config.censor_prob_min = range[0];
      config.censor_prob_max = range[1];
    } else if (key == "interim_event_fraction") {
      config.interim_event_fraction = value.as_double(key);
    } else if (key == "min_events_per_arm") {
      config.min_events_per_arm = static_cast<int>(value.as_int(key));
    } else if (key == "enrollment_rate") {
      config.enrollment_rate = value.as_double(key);
    } else if (key == "control_hazard") {
      config.control_hazard = value.as_double(key);
    } else if (key == "weibull_shape") {
      config.weibull_shape = value.as_double(key);
    } else if (key == "external_size_min") {
      config.external_size_min = static_cast<int>(value.as_int(key));
    } else if (key == "base_seed") {
      config.base_seed = static_cast<std::uint64_t>(value.as_int(key));
    } else if (key == "solver.search_lower_offset") {
      solver.search_lower_offset = value.as_double(key);
    } else if (key == "solver.search_upper") {
      solver.search_upper = value.as_double(key);
    } else if (key == "solver.fd_epsilon") {
      solver.fd_epsilon = value.as_double(key);
    } else if (key == "solver.derivative_cutoff") {
      solver.derivative_cutoff = value.as_double(key);
    } else if (key == "solver.root_tolerance") {
      solver.root_tolerance = value.as_double(key);
    }
  }
  config.validate();
  solver.validate();
}

inline void apply_config_file(const std::string& path, ScenarioConfig& config,
                              SolverConfig& solver) {
  apply_config(toml::parse_file(path), config, solver);
}

}  // namespace enee
