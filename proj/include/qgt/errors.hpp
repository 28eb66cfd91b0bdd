#pragma once

#include <stdexcept>
#include <string>

namespace qgt {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Eigendecomposition left the supported regime.
struct DegenerateSpectrum : Error { using Error::Error; };
struct ComplexSpectrum : Error { using Error::Error; };
struct NotPseudoHermitian : Error { using Error::Error; };
struct ZeroVector : Error { using Error::Error; };

// Model construction.
struct NonPositiveQ : Error { using Error::Error; };
struct ComplexEigenvalues : Error { using Error::Error; };
struct UnknownDirection : Error { using Error::Error; };

// Dynamics.
struct TimeOutOfRange : Error { using Error::Error; };
struct StepRejected : Error { using Error::Error; };

// QGT evaluation and measurement.
struct StepTooLarge : Error { using Error::Error; };
struct IndexMismatch : Error { using Error::Error; };
struct NearOrthogonal : Error { using Error::Error; };

// Circuit simulation.
struct DimensionMismatch : Error { using Error::Error; };

// CLI configuration.
struct ConfigError : Error { using Error::Error; };

} // namespace qgt
