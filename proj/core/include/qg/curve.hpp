#pragma once

#include <array>
#include <complex>

#include "qg/walk_model.hpp"

namespace qg {

using cplx = std::complex<double>;

// A point of the real projective line: a finite value or the point at
// infinity.  Branch points x4, y4 pass through infinity as the leading
// discriminant coefficient changes sign, so the representation is explicit.
struct ExtendedReal {
    double value = 0.0;
    bool is_inf = false;

    static ExtendedReal infinity() { return {0.0, true}; }
    static ExtendedReal finite(double v) { return {v, false}; }
};

// Quadratic c0 + c1*t + c2*t^2 with real coefficients.
struct Quadratic {
    double c0 = 0, c1 = 0, c2 = 0;
    cplx operator()(cplx t) const { return (c2 * t + c1) * t + c0; }
    double operator()(double t) const { return (c2 * t + c1) * t + c0; }
};

// Both orderings of the kernel polynomial
//   Q(x,y) = a(x) y^2 + b(x) y + c(x) = at(y) x^2 + bt(y) x + ct(y).
struct CurvePolynomials {
    Quadratic a, b, c;     // in x, grouping powers of y
    Quadratic at, bt, ct;  // in y, grouping powers of x
};

// Quartic (or lower degree) polynomial d0 + d1 t + ... + d4 t^4.
using Quartic = std::array<double, 5>;

struct BranchPoints {
    double x1 = 0, y1 = 0;    // the roots inside (-1, 1)
    ExtendedReal x4, y4;      // the roots outside [-1, 1], possibly infinite
    double disc_x = 0;        // p_{1,0}^2 - 4 p_{1,1} p_{1,-1}, sign of x4
    double disc_y = 0;        // p_{0,1}^2 - 4 p_{1,1} p_{-1,1}, sign of y4
};

// Q(x, y) evaluated as the bivariate polynomial sum p_ij x^{i+1} y^{j+1} - xy,
// well defined on both axes.
cplx q_eval(const JumpKernel& k, cplx x, cplx y);

CurvePolynomials curve_polynomials(const JumpKernel& k);

// d(x) = b^2 - 4ac and its dual dt(y); both vanish to second order at 1 for
// zero-drift kernels.
Quartic discriminant_d(const CurvePolynomials& cp);
Quartic discriminant_dt(const CurvePolynomials& cp);

// Branch points from the exact deflation d(x) = (x - 1)^2 q(x); q is solved
// with the numerically stable quadratic formula. Throws degenerate_curve_error
// when q collapses.
BranchPoints branch_points(const JumpKernel& k);

double eval_quartic(const Quartic& q, double t);

}  // namespace qg
