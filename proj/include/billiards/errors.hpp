#pragma once

#include <stdexcept>
#include <string>

namespace billiards {

/// Curvature-Fourier coefficients that do not satisfy the closure
/// conditions (the curve would not close up).
struct ClosureViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// rho <= 0 somewhere: the data does not describe a strictly convex curve.
struct ConvexityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two impact points of a periodic orbit merged (cyclic ordering collapse),
/// or a perimeter tie between distinct critical points.
struct DegenerateOrbitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A root finder or Newton iteration failed to converge.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested an inversion-based construction while the certified operator
/// norm deviation is >= 1 (Neumann series not justified).
struct NotContractiveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace billiards
