#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "qg/uniformization.hpp"
#include "qg/walk_model.hpp"

namespace qg {

// Contour configuration for green_value.  theta = NaN requests the
// steepest-descent angle arg(rho(j/i)) clamped to [2pi/3 + 0.01, pi - 0.01]
// and nudged off any pole direction of the integrand.
struct RayContour {
    double theta = std::numeric_limits<double>::quiet_NaN();
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_intervals = 2000;
};

struct GreenEstimate {
    enum class Method { contour, oracle, monte_carlo, asymptotic };

    double value = 0.0;
    double abs_error = 0.0;
    Method method = Method::contour;
    double theta = 0.0;       // contour angle actually used
    long evaluations = 0;     // integrand evaluations (or paths, or cycles)
    double imag_residual = 0; // |Im| discarded after the realness check
};

// Taylor coefficients nu_p of chi(z) = ln x(z) + slope * ln y(z) at z = 0:
//   p * nu_p = (z0^p + z0^-p - z1^p - z1^-p)
//            + slope * (z2^p + z2^-p - z3^p - z3^-p) / K^p,
// branch-free since z^p + z^-p is a polynomial in z + 1/z.
struct SeriesCoefficients {
    double slope = 0;
    std::vector<cplx> nu;  // nu[p-1] holds nu_p
};

SeriesCoefficients nu_coefficients(const UniformizationData& u, double slope, int max_order);

// Saddle tangent rho = 1/nu_1; arg(rho) lies in [2pi/3, pi].
cplx rho(const UniformizationData& u, double slope);

// Integrand of the contour representation,
//   -orbit_sum(z) x'(z) / (dQ/dy(x(z), y(z)) * x(z)^i y(z)^j),
// with dQ/dy = 2 a(x) y + b(x).  The reciprocal powers are multiplied in so
// that the far tail underflows to zero instead of producing inf/inf.
cplx green_integrand(const JumpKernel& k, const UniformizationData& u,
                     int i0, int j0, int i, int j, cplx z);

// G^{(i0,j0)}_{(i,j)} = (1/2 pi i) * integral over the ray e^{i theta}[0, inf)
// of the integrand above, evaluated with the substitution z = e^{i theta}
// t/(1-t) and adaptive Gauss-Kronrod quadrature.  The imaginary part must
// come out at rounding level; it is checked against 1e-6 |value| and
// discarded.
GreenEstimate green_value(const JumpKernel& k, const UniformizationData& u,
                          int i0, int j0, int i, int j, const RayContour& contour = {});

// Batch evaluation, optionally multi-threaded; results are positionally
// aligned with targets and independent of the thread count.
std::vector<GreenEstimate> green_grid(const JumpKernel& k, const UniformizationData& u,
                                      int i0, int j0, const std::vector<LatticePoint>& targets,
                                      const RayContour& contour = {}, int threads = 1);

}  // namespace qg
