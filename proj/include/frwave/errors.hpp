#pragma once

#include <stdexcept>
#include <string>

namespace frwave {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidModel : Error { using Error::Error; };
struct DegenerateEquationOfState : Error { using Error::Error; };
struct MissingW : Error { using Error::Error; };
struct NonIntegerPowerNegativeBase : Error { using Error::Error; };
struct InvalidGrid : Error { using Error::Error; };
struct FrameMismatch : Error { using Error::Error; };
struct LatticeMismatch : Error { using Error::Error; };
struct InvalidParameters : Error { using Error::Error; };
struct UnknownColumn : Error { using Error::Error; };

/// Config-file syntax problem (bad line, unknown key).
struct ParseError : Error { using Error::Error; };
/// Config validated but violates a cross-field invariant.
struct ValidationError : Error { using Error::Error; };

/// Thrown by a single step when the field leaves the finite range.
/// evolve() converts this into Trajectory status BlowUp.
struct BlowUpDetected : Error {
    explicit BlowUpDetected(double tau_)
        : Error("solution blew up at tau = " + std::to_string(tau_)), tau(tau_) {}
    double tau;
};

}  // namespace frwave
