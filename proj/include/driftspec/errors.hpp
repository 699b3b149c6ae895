#ifndef DRIFTSPEC_ERRORS_HPP
#define DRIFTSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace driftspec {

// Base for every library failure so callers can catch one type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Curve construction / validation
struct NonPositiveRadius : Error {
    using Error::Error;
};
struct OpenCurve : Error {
    using Error::Error;
};
struct InvariantViolation : Error {
    using Error::Error;
};

// Iterative solvers
struct NoConvergence : Error {
    using Error::Error;
};
struct NoSignChange : Error {
    using Error::Error;
};
struct EigensolverFailure : Error {
    using Error::Error;
};

// ODE integration
struct AxisSingularity : Error {
    using Error::Error;
};
struct LengthExceeded : Error {
    using Error::Error;
};

// Spectral diagnostics
struct ZeroNotFound : Error {
    using Error::Error;
};
struct AllBelowThreshold : Error {
    using Error::Error;
};

// Sphere-ambient bound
struct InvalidRadius : Error {
    using Error::Error;
};

// Input parsing / file format problems
struct ParseError : Error {
    using Error::Error;
};

} // namespace driftspec

#endif
