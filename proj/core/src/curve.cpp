#include "qg/curve.hpp"

#include <cmath>

#include "qg/errors.hpp"

namespace qg {

namespace {

// b^2 - 4ac as a quartic in t.
Quartic discriminant_of(const Quadratic& a, const Quadratic& b, const Quadratic& c) {
    Quartic d{};
    auto add_product = [&d](const Quadratic& u, const Quadratic& v, double scale) {
        const double uc[3] = {u.c0, u.c1, u.c2};
        const double vc[3] = {v.c0, v.c1, v.c2};
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) d[m + n] += scale * uc[m] * vc[n];
    };
    add_product(b, b, 1.0);
    add_product(a, c, -4.0);
    return d;
}

}  // namespace

cplx q_eval(const JumpKernel& k, cplx x, cplx y) {
    // Horner over powers of x then y; exponents are i+1, j+1 in {0,1,2}.
    cplx acc = 0;
    for (int ei = 2; ei >= 0; --ei) {
        cplx row = 0;
        for (int ej = 2; ej >= 0; --ej) row = row * y + k.at(ei - 1, ej - 1);
        acc = acc * x + row;
    }
    return acc - x * y;
}

CurvePolynomials curve_polynomials(const JumpKernel& k) {
    CurvePolynomials cp;
    cp.a = {k.at(-1, 1), k.at(0, 1), k.at(1, 1)};
    cp.b = {k.at(-1, 0), -1.0, k.at(1, 0)};
    cp.c = {k.at(-1, -1), k.at(0, -1), k.at(1, -1)};
    cp.at = {k.at(1, -1), k.at(1, 0), k.at(1, 1)};
    cp.bt = {k.at(0, -1), -1.0, k.at(0, 1)};
    cp.ct = {k.at(-1, -1), k.at(-1, 0), k.at(-1, 1)};
    return cp;
}

Quartic discriminant_d(const CurvePolynomials& cp) {
    return discriminant_of(cp.a, cp.b, cp.c);
}

Quartic discriminant_dt(const CurvePolynomials& cp) {
    return discriminant_of(cp.at, cp.bt, cp.ct);
}

double eval_quartic(const Quartic& q, double t) {
    return (((q[4] * t + q[3]) * t + q[2]) * t + q[1]) * t + q[0];
}

namespace {

// Divide the quartic twice by (t - 1), dropping the remainders; they are
// O(eps) because zero drift forces d(1) = d'(1) = 0.
//
// Matching (t-1)^2 (q2 t^2 + q1 t + q0) against d gives two expressions for
// each coefficient.  Take q0 from the low end and q2 from the high end so
// that d0 = 0 (a branch point exactly at the origin) survives deflation
// exactly; otherwise the noise gets amplified by the square root downstream
// when the associated z-point degenerates to a double root.
Quadratic deflate_double_root_at_one(const Quartic& d) {
    double q2 = d[4];
    double q0 = d[0];
    double q1 = 0.5 * ((d[1] + 2.0 * d[0]) + (d[3] + 2.0 * d[4]));
    return {q0, q1, q2};
}

struct RootPair {
    double inner;        // the root in (-1, 1)
    ExtendedReal outer;  // the root outside [-1, 1]
};

RootPair solve_deflated(const Quadratic& q, const char* axis) {
    const double scale = std::fabs(q.c0) + std::fabs(q.c1) + std::fabs(q.c2);
    if (scale < 1e-300)
        throw degenerate_curve_error(std::string("curve degenerate: deflated discriminant in ")
                                     + axis + " vanishes identically");

    auto classify = [axis](double r1, ExtendedReal r2) -> RootPair {
        bool in1 = std::fabs(r1) < 1.0;
        bool in2 = !r2.is_inf && std::fabs(r2.value) < 1.0;
        if (in1 == in2)
            throw degenerate_curve_error(std::string("curve degenerate: branch points in ")
                                         + axis + " do not straddle the unit interval");
        if (in1) return {r1, r2};
        if (r2.is_inf)
            throw degenerate_curve_error(std::string("curve degenerate: no finite branch point "
                                                     "inside (-1,1) in ") + axis);
        return {r2.value, ExtendedReal::finite(r1)};
    };

    if (std::fabs(q.c2) <= 1e-14 * scale) {
        // Leading coefficient is the second discriminant; its vanishing sends
        // the outer branch point through infinity.
        if (std::fabs(q.c1) <= 1e-14 * scale)
            throw degenerate_curve_error(std::string("curve degenerate: deflated discriminant in ")
                                         + axis + " has no roots");
        return classify(-q.c0 / q.c1, ExtendedReal::infinity());
    }

    double disc = q.c1 * q.c1 - 4 * q.c2 * q.c0;
    if (disc < 0)
        throw degenerate_curve_error(std::string("complex branch points in ") + axis);
    double root = std::sqrt(disc);
    double r1, r2;
    if (q.c1 >= 0) {
        double t = -0.5 * (q.c1 + root);
        r1 = t / q.c2;
        r2 = (t != 0) ? q.c0 / t : 0.0;
    } else {
        double t = -0.5 * (q.c1 - root);
        r1 = t / q.c2;
        r2 = (t != 0) ? q.c0 / t : 0.0;
    }
    return classify(r1, ExtendedReal::finite(r2));
}

}  // namespace

BranchPoints branch_points(const JumpKernel& k) {
    const CurvePolynomials cp = curve_polynomials(k);
    const Quartic d = discriminant_d(cp);
    const Quartic dt = discriminant_dt(cp);

    BranchPoints bp;
    bp.disc_x = k.at(1, 0) * k.at(1, 0) - 4 * k.at(1, 1) * k.at(1, -1);
    bp.disc_y = k.at(0, 1) * k.at(0, 1) - 4 * k.at(1, 1) * k.at(-1, 1);

    RootPair x = solve_deflated(deflate_double_root_at_one(d), "x");
    RootPair y = solve_deflated(deflate_double_root_at_one(dt), "y");
    bp.x1 = x.inner;
    bp.x4 = x.outer;
    bp.y1 = y.inner;
    bp.y4 = y.outer;
    return bp;
}

}  // namespace qg
