#pragma once

#include <stdexcept>
#include <string>

namespace qg {

// Base class for all library failures so callers can catch one type.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Family parameters outside the feasible polytope (some probability < 0,
// probabilities not summing to 1, or an excluded parameter range).
struct infeasible_error : error {
    using error::error;
};

// Kernel whose characteristic curve degenerates (discriminant collapses,
// repeated branch points, zero quadratic coefficients where a root is needed).
struct degenerate_curve_error : error {
    using error::error;
};

// No square-root branch assignment reproduces the curve, or a computed
// invariant (|K| = 1, on-curve residual) fails its gate.
struct branch_error : error {
    using error::error;
};

// Evaluation too close to a pole of the uniformization maps.
struct pole_error : error {
    using error::error;
};

// An iterative solver or adaptive quadrature failed to reach tolerance.
struct nonconvergence_error : error {
    using error::error;
};

// A quantity that must be real carries a non-negligible imaginary part.
struct nonreal_error : error {
    using error::error;
};

// A ratio whose denominator is smaller than its own error estimate.
struct instability_error : error {
    using error::error;
};

// A sanity gate on a derived constant failed (wrong sign that cannot be
// repaired, or disagreement with a direct evaluation).
struct gate_error : error {
    using error::error;
};

// Malformed input files, unknown configuration keys, unwritable outputs.
struct io_error : error {
    using error::error;
};

}  // namespace qg
