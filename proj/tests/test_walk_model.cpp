#include <cmath>

#include "doctest.h"
#include "qg/errors.hpp"
#include "qg/walk_model.hpp"
#include "support.hpp"

using namespace qg;
using qgtest::close;

TEST_CASE("cubic evaluates as i j (i + alpha j + beta)") {
    CHECK(cubic_harmonic(1.0, 0.0, {1, 1}) == 2.0);
    CHECK(cubic_harmonic(1.0, 0.0, {2, 3}) == 30.0);
    CHECK(cubic_harmonic(0.5, -0.25, {4, 2}) == doctest::Approx(4 * 2 * (4 + 1.0 - 0.25)));
    CHECK(cubic_harmonic(1.7, 0.3, {0, 5}) == 0.0);
    CHECK(cubic_harmonic(1.7, 0.3, {5, 0}) == 0.0);
}

TEST_CASE("symmetric walk kernel is valid, drift-free and harmonic") {
    JumpKernel k = qgtest::su3_kernel();
    CHECK(validate_kernel(k).valid());
    CHECK(k.sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::fabs(k.drift_x()) <= 1e-16);
    CHECK(std::fabs(k.drift_y()) <= 1e-16);
    CHECK(harmonicity_residual(k, 1.0, 0.0) <= 2e-12);
}

TEST_CASE("family construction reproduces the symmetric walk at (1,0,0,1/3)") {
    JumpKernel k = kernel_from_cubic_family({1.0, 0.0, 0.0, 1.0 / 3.0});
    JumpKernel want = qgtest::su3_kernel();
    for (auto [di, dj] : kJumps) CHECK(k.at(di, dj) == doctest::Approx(want.at(di, dj)).epsilon(1e-15));
}

TEST_CASE("cartesian subfamily members are harmonic for alpha=1, beta=0") {
    for (double mu : {0.05, 1.0 / 6.0, 0.3}) {
        JumpKernel k = qgtest::cartesian_kernel(mu);
        CHECK(validate_kernel(k).valid());
        CHECK(harmonicity_residual(k, 1.0, 0.0) <= 2e-12);
    }
}

TEST_CASE("sampled family kernels validate and stay harmonic") {
    for (const auto& s : qgtest::sample_family(411, 25)) {
        CAPTURE(s.params.alpha);
        CAPTURE(s.params.beta);
        CHECK(validate_kernel(s.kernel).valid());
        // Rounding the exact solution to doubles leaves a residual of order
        // eps * max|h| ~ 25000 * 1e-16 on [1,20]^2.
        CHECK(harmonicity_residual(s.kernel, s.params.alpha, s.params.beta) <= 3e-11);
    }
}

TEST_CASE("infeasible parameters throw or return nullopt") {
    CHECK_THROWS_AS((void)kernel_from_cubic_family({0.3, 0.0, 0.0, 0.1}), infeasible_error);
    CHECK_THROWS_AS((void)kernel_from_cubic_family({1.0, 5.0, 0.0, 0.1}), infeasible_error);
    CHECK_THROWS_AS((void)kernel_from_cubic_family({1.0, 0.0, 0.9, 0.9}), infeasible_error);
    CHECK(!try_kernel_from_cubic_family({0.3, 0.0, 0.0, 0.1}).has_value());
    CHECK(try_kernel_from_cubic_family({1.0, 0.0, 0.0, 1.0 / 3.0}).has_value());
}

TEST_CASE("validate flags bad mass, negativity and drift") {
    JumpKernel k = qgtest::su3_kernel();
    k.at(1, 0) = 0.5;  // breaks mass and drift
    ValidationReport rep = validate_kernel(k);
    CHECK(!rep.valid());

    JumpKernel neg{};
    neg.at(1, 0) = -0.1;
    neg.at(-1, 0) = 0.55;
    CHECK(!validate_kernel(neg).valid());
}

TEST_CASE("parameter inference inverts the family construction") {
    for (const auto& s : qgtest::sample_family(77, 10)) {
        auto got = infer_cubic_params(s.kernel);
        REQUIRE(got.has_value());
        CHECK(close(got->first, s.params.alpha, 1e-9));
        CHECK(close(got->second, s.params.beta, 1e-8));
    }
}

TEST_CASE("inference rejects a walk with no cubic of this shape") {
    JumpKernel k{};  // simple symmetric walk, zero drift but not in the family
    k.at(1, 0) = k.at(-1, 0) = k.at(0, 1) = k.at(0, -1) = 0.25;
    CHECK(!infer_cubic_params(k).has_value());
}
