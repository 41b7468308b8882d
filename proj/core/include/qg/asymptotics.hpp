#pragma once

#include <complex>

#include "qg/uniformization.hpp"
#include "qg/walk_model.hpp"

namespace qg {

// How much validation the model constructor performs. The positivity gate is
// algebraic and cheap; the empirical gate prices one contour evaluation at a
// large index pair, so parameter sweeps may opt out of it.
enum class GateLevel {
    positivity,
    empirical,
};

// The square-root and z0 branches entering the constant, kept for audit.
struct AsymptoticPieces {
    cplx z0_minus_inv;  // z0 - 1/z0
    cplx sqrt_disc_x;   // principal sqrt of p10^2 - 4 p11 p1m1
    double omega_x = 0;
    double alpha = 0;
};

struct AsymptoticModel {
    double C = 0;  // leading constant, positive after gating
    double alpha = 0;
    double beta = 0;
    AsymptoticPieces pieces;
    // The closed form assembled with our branch conventions can come out
    // negative; the gate then flips it and records the flip here.
    bool sign_flipped = false;
    // green_value / leading-term at the probe index (NaN when the empirical
    // gate was skipped).
    double gate_ratio = 0;
};

// C = Re[ i (z0 - 1/z0) 27 alpha^2 / (2 pi sqrt(disc_x) Omega_x) ], with the
// sign repaired to positive when the branch bookkeeping produces a negative
// value. Throws gate_error when the assembled value is not real or vanishes.
double constant_C(const JumpKernel& k, const UniformizationData& u, double alpha,
                  bool* sign_flipped = nullptr, AsymptoticPieces* pieces = nullptr);

// Builds the model; GateLevel::empirical additionally compares the leading
// term against a contour evaluation at (100, 100) from (1, 1) and throws
// gate_error when they disagree by more than 10%.
AsymptoticModel make_asymptotic_model(const JumpKernel& k, const UniformizationData& u,
                                      double alpha, double beta,
                                      GateLevel gate = GateLevel::empirical);

// C h(i0,j0) i j (i + alpha j) / (i^2 + alpha i j + alpha^2 j^2)^3.
double green_asymptotic(const AsymptoticModel& m, int i0, int j0, int i, int j);

// Adds the next-order correction: the bracket becomes
// 2 (rho/i)^3 - 2 conj(rho/i)^3 - 24 [nu2 rho^5 - conj(nu2 rho^5)] / i^4,
// multiplied by the same gated prefactor. Reduces to green_asymptotic when
// the correction term is dropped.
double green_asymptotic_two_term(const AsymptoticModel& m, const UniformizationData& u,
                                 int i0, int j0, int i, int j);

enum class BoundarySide {
    horizontal,  // absorption at (i, 0)
    vertical,    // absorption at (0, j)
};

// Absorption-probability asymptotic along one axis at distance i from the
// corner: C (p_{1,-1}+p_{0,-1}+p_{-1,-1}) h(i0,j0) / i^4 on the horizontal
// side, with the factor replaced by (p_{-1,1}+p_{-1,0}+p_{-1,-1}) / alpha^5
// on the vertical one.
double absorption_asymptotic(const AsymptoticModel& m, const JumpKernel& k, int i0, int j0,
                             BoundarySide side, int i);

// Third Taylor coefficient of the alternating orbit sum at z = 0:
// (i 3^{3/2} / 2) alpha Omega_x^3 i0 j0 (i0 + alpha j0 + beta).
cplx orbit_cubic_coefficient(const UniformizationData& u, double alpha, double beta,
                             int i0, int j0);

}  // namespace qg
