#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "qg/curve.hpp"
#include "qg/walk_model.hpp"

namespace qg {

// Rational uniformization of the genus-zero curve Q(x, y) = 0:
//   x(z) = (z^2 - s1 z + 1) / (z^2 - s0 z + 1),
//   y(z) = (z^2 - K s3 z + K^2) / (z^2 - K s2 z + K^2),
// where s_k = z_k + 1/z_k.  The maps depend on the z_k only through the sums
// s_k, which are real and branch-free; the stored z_k are canonical
// representatives (lower half-plane for the x pair, upper for the y pair,
// modulus >= 1 when real).  z = 1 maps to x1, z = -1 to x4, z = K to y1,
// z = -K to y4, z = 0 and infinity to the double point (1, 1).
struct UniformizationData {
    BranchPoints bp;
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    cplx z0, z1, z2, z3;
    cplx K;               // Im(K) <= 0, |K| = 1
    double omega_x = 0;   // s0 - s1 = 4(x4-1)(x1-1)/(x4-x1) < 0
    double omega_y = 0;   // s2 - s3 < 0
    double alpha_ratio = 0;  // omega_y / omega_x; equals alpha on the cubic family
};

UniformizationData uniformize(const JumpKernel& k);

cplx x_of_z(const UniformizationData& u, cplx z);
cplx y_of_z(const UniformizationData& u, cplx z);

// x'(z) = omega_x (1 - z^2) / (z^2 - s0 z + 1)^2.
cplx x_prime(const UniformizationData& u, cplx z);

// Max of |Q(x(z), y(z))| / sum of monomial magnitudes, over deterministic
// pseudo-random samples drawn away from the poles of the maps.  The scaling
// keeps the residual at rounding level even where |y(z)| blows up.
double verify_on_curve(const JumpKernel& k, const UniformizationData& u, int samples = 1000,
                       std::uint64_t seed = 12345);

// The dihedral group of the walk, as Moebius maps z -> (az + b)/(cz + d):
// identity, xi(z) = 1/z, eta(z) = K^2/z and their words.  Lengths 0..3,
// sign = (-1)^length.
struct GroupElement {
    const char* label;
    int length;
    int sign;
    cplx a, b, c, d;
    cplx operator()(cplx z) const { return (a * z + b) / (c * z + d); }
};

std::array<GroupElement, 6> group_elements(cplx K);

// Alternating orbit sum  sum_w (-1)^l(w) x(w z)^i0 y(w z)^j0.  Vanishes to
// third order at z = 0; invariant under z -> K^2 z, negated under z -> 1/z.
cplx orbit_sum(const UniformizationData& u, int i0, int j0, cplx z);

// z^n for integer n (repeated squaring; negative n via the reciprocal).
cplx ipow(cplx base, long n);

// Distance from the shortest pole of the six orbit terms to the origin;
// the Taylor extraction circle must stay well inside.
double min_pole_radius(const UniformizationData& u);

}  // namespace qg
