#include <cmath>

#include "doctest.h"
#include "qg/curve.hpp"
#include "qg/errors.hpp"
#include "support.hpp"

using namespace qg;

TEST_CASE("kernel polynomial splits into quadratics in either variable") {
    JumpKernel k = qgtest::sample_family(5, 1)[0].kernel;
    CurvePolynomials cp = curve_polynomials(k);
    for (double xr : {0.3, -0.7, 1.4}) {
        for (double yr : {0.2, -1.1, 0.8}) {
            cplx x(xr, 0.1), y(yr, -0.2);
            cplx direct = q_eval(k, x, y);
            cplx via_y = cp.a(x) * y * y + cp.b(x) * y + cp.c(x);
            cplx via_x = cp.at(y) * x * x + cp.bt(y) * x + cp.ct(y);
            CHECK(std::abs(direct - via_y) <= 1e-14);
            CHECK(std::abs(direct - via_x) <= 1e-14);
        }
    }
}

TEST_CASE("symmetric walk branch points are 0, 4, 1/4, infinity") {
    BranchPoints bp = branch_points(qgtest::su3_kernel());
    CHECK(bp.x1 == 0.0);
    CHECK(bp.x4.value == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(!bp.x4.is_inf);
    CHECK(bp.y1 == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(bp.y4.is_inf);
    CHECK(bp.disc_x == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(bp.disc_y == 0.0);
}

TEST_CASE("inner branch points stay inside (-1,1) across the family") {
    for (const auto& s : qgtest::sample_family(31, 20)) {
        BranchPoints bp = branch_points(s.kernel);
        CHECK(bp.x1 > -1.0);
        CHECK(bp.x1 < 1.0);
        CHECK(bp.y1 > -1.0);
        CHECK(bp.y1 < 1.0);
        if (!bp.x4.is_inf) CHECK(std::fabs(bp.x4.value) > 1.0);
        if (!bp.y4.is_inf) CHECK(std::fabs(bp.y4.value) > 1.0);
    }
}

TEST_CASE("branch points are discriminant roots") {
    for (const auto& s : qgtest::sample_family(59, 10)) {
        BranchPoints bp = branch_points(s.kernel);
        CurvePolynomials cp = curve_polynomials(s.kernel);
        auto disc = [&](double x) {
            cplx b = cp.b(cplx(x)), a = cp.a(cplx(x)), c = cp.c(cplx(x));
            return (b * b - 4.0 * a * c).real();
        };
        // d is a quartic with a double root at 1; scale the tolerance to its
        // local size.
        CHECK(std::fabs(disc(bp.x1)) <= 1e-12);
        if (!bp.x4.is_inf) CHECK(std::fabs(disc(bp.x4.value)) <= 1e-10 * (1 + std::pow(bp.x4.value, 4)));
    }
}

TEST_CASE("degenerate one-dimensional kernels are rejected") {
    JumpKernel flat{};  // never moves vertically
    flat.at(1, 0) = flat.at(-1, 0) = 0.5;
    CHECK_THROWS_AS((void)branch_points(flat), degenerate_curve_error);
}
