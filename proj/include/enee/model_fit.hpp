#pragma once

namespace enee {

enum class ModelKind { exponential, cox };

inline const char* to_string(ModelKind k) {
  return k == ModelKind::exponential ? "exponential" : "cox";
}

/// Fitted log hazard ratio (experimental vs control) and its precision.
/// precision == 1/variance; fits that return have converged.
struct ModelFit {
  ModelKind model_kind = ModelKind::exponential;
  double log_hr = 0.0;
  double variance = 0.0;
  double precision = 0.0;
  bool converged = false;
  int iterations = 0;
};

}  // namespace enee
