#pragma once

#include <stdexcept>
#include <string>

namespace enee {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Domain / construction errors
struct InvalidSubject : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };

// Model fitting errors
struct EmptyArm : Error { using Error::Error; };
struct NoEventsInArm : Error { using Error::Error; };
struct Separation : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };

// Borrow estimation errors
struct PrecisionAtOrAbovePole : Error { using Error::Error; };
struct EvaluationFailed : Error { using Error::Error; };
struct KappaZero : Error { using Error::Error; };

// Simulation errors
struct TriggerNeverReached : Error { using Error::Error; };
struct ExternalSizeInfeasible : Error { using Error::Error; };

// IO errors carry the offending path in the message
struct IoError : Error { using Error::Error; };

}  // namespace enee
