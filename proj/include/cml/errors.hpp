#pragma once

#include <stdexcept>
#include <string>

namespace cml {

// Base class for all failures raised by the library. CLI maps these to
// exit code 2 (domain/validation) or 3 (internal consistency).
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// The drive has no critical points at this coupling (|L dPhi| < 1 everywhere).
struct NoCriticalPointsError : Error {
    using Error::Error;
};

// Quadratic/linear comparability constant exceeded the search cap.
struct K0UnboundedError : Error {
    using Error::Error;
};

struct InvalidBetaError : Error {
    using Error::Error;
};

struct InvalidOverridesError : Error {
    using Error::Error;
};

// A distortion summand d_i collapsed to zero (orbit step landed exactly on a
// critical point), so the ladder past that index is undefined.
struct DegenerateLadderError : Error {
    using Error::Error;
};

// A return is deeper than the deepest radius the ladder horizon resolves.
struct LadderExhaustedError : Error {
    using Error::Error;
};

// Two supposedly equivalent computations disagreed beyond tolerance.
// This always indicates an implementation bug, never a math failure.
struct OracleMismatchError : Error {
    using Error::Error;
};

// A full-horizon trace was required but the orbit hit a critical point.
struct CriticalHitError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace cml
