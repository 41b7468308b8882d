#include <cmath>
#include <complex>

#include "doctest.h"
#include "qg/asymptotics.hpp"
#include "qg/green_integral.hpp"
#include "qg/numerics/cauchy.hpp"
#include "qg/uniformization.hpp"
#include "support.hpp"

using namespace qg;

TEST_CASE("leading constant for the symmetric walk is 27 sqrt(3) / 2 pi") {
    JumpKernel k = qgtest::su3_kernel();
    UniformizationData u = uniformize(k);
    bool flipped = false;
    AsymptoticPieces pieces;
    double C = constant_C(k, u, 1.0, &flipped, &pieces);
    CHECK(C == doctest::Approx(27.0 * std::sqrt(3.0) / (2.0 * M_PI)).epsilon(1e-12));
    CHECK(pieces.omega_x == doctest::Approx(-3.0).epsilon(1e-13));
    CHECK(std::abs(pieces.sqrt_disc_x - cplx(1.0 / 3.0, 0.0)) <= 1e-13);
}

TEST_CASE("model passes the empirical gate and predicts far-field values") {
    JumpKernel k = qgtest::su3_kernel();
    UniformizationData u = uniformize(k);
    AsymptoticModel m = make_asymptotic_model(k, u, 1.0, 0.0);
    CHECK(std::fabs(m.gate_ratio - 1.0) <= 0.01);
    GreenEstimate g = green_value(k, u, 1, 1, 80, 80);
    CHECK(qgtest::close_rel(green_asymptotic(m, 1, 1, 80, 80), g.value, 0.01));
}

TEST_CASE("leading term has the stated shape") {
    JumpKernel k = qgtest::su3_kernel();
    UniformizationData u = uniformize(k);
    AsymptoticModel m = make_asymptotic_model(k, u, 1.0, 0.0, GateLevel::positivity);
    int i = 30, j = 40;
    double denom = std::pow(double(i) * i + double(i) * j + double(j) * j, 3.0);
    double want = m.C * cubic_harmonic(1.0, 0.0, {1, 1}) * i * j * (i + j) / denom;
    CHECK(green_asymptotic(m, 1, 1, i, j) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("second-order term sharpens the off-diagonal directions") {
    JumpKernel k = qgtest::su3_kernel();
    UniformizationData u = uniformize(k);
    AsymptoticModel m = make_asymptotic_model(k, u, 1.0, 0.0, GateLevel::positivity);
    for (auto [i, j] : {std::pair{50, 25}, {25, 50}}) {
        double exact = green_value(k, u, 1, 1, i, j).value;
        double lead = green_asymptotic(m, 1, 1, i, j);
        double two = green_asymptotic_two_term(m, u, 1, 1, i, j);
        CHECK(2.0 * std::fabs(two - exact) <= std::fabs(lead - exact));
        CHECK(qgtest::close_rel(two, exact, 0.01));
    }
    // On the diagonal with alpha = 1 the correction term nu_2 rho^5 is real,
    // so it cancels against its conjugate and the two values coincide.
    double lead = green_asymptotic(m, 1, 1, 50, 50);
    double two = green_asymptotic_two_term(m, u, 1, 1, 50, 50);
    CHECK(two == doctest::Approx(lead).epsilon(1e-12));
}

TEST_CASE("second-order term sharpens every direction when alpha differs from 1") {
    JumpKernel k = kernel_from_cubic_family({1.3, 0.2, 0.05, 0.22});
    UniformizationData u = uniformize(k);
    AsymptoticModel m = make_asymptotic_model(k, u, 1.3, 0.2, GateLevel::positivity);
    for (auto [i, j] : {std::pair{50, 25}, {50, 50}, {25, 50}}) {
        double exact = green_value(k, u, 1, 1, i, j).value;
        double lead = green_asymptotic(m, 1, 1, i, j);
        double two = green_asymptotic_two_term(m, u, 1, 1, i, j);
        CHECK(2.0 * std::fabs(two - exact) <= std::fabs(lead - exact));
    }
}

TEST_CASE("constant stays positive across the family") {
    for (const auto& s : qgtest::sample_family(1234, 30)) {
        UniformizationData u = uniformize(s.kernel);
        CHECK(constant_C(s.kernel, u, s.params.alpha) > 0.0);
    }
}

TEST_CASE("orbit cubic coefficient matches a numeric expansion") {
    auto s = qgtest::sample_family(86, 1)[0];
    UniformizationData u = uniformize(s.kernel);
    double r = 0.25 * min_pole_radius(u);
    for (auto [i0, j0] : {std::pair{1, 1}, {3, 2}}) {
        auto co = numerics::taylor_coefficients(
            [&](cplx z) { return orbit_sum(u, i0, j0, z); }, 4, r);
        cplx want = orbit_cubic_coefficient(u, s.params.alpha, s.params.beta, i0, j0);
        CHECK(std::abs(co[3] - want) <= 1e-9 * std::abs(want));
        CHECK(std::abs(co[2]) <= 1e-10 * std::abs(want));
    }
}

TEST_CASE("boundary absorption decays like the fourth power with stated factors") {
    JumpKernel k = qgtest::su3_kernel();
    UniformizationData u = uniformize(k);
    AsymptoticModel m = make_asymptotic_model(k, u, 1.0, 0.0, GateLevel::positivity);
    double h0 = cubic_harmonic(1.0, 0.0, {1, 1});
    double want_h = m.C * (1.0 / 3.0) * h0 / std::pow(20.0, 4);
    double want_v = m.C * (1.0 / 3.0) / 1.0 * h0 / std::pow(20.0, 4);  // alpha = 1
    CHECK(absorption_asymptotic(m, k, 1, 1, BoundarySide::horizontal, 20) ==
          doctest::Approx(want_h).epsilon(1e-13));
    CHECK(absorption_asymptotic(m, k, 1, 1, BoundarySide::vertical, 20) ==
          doctest::Approx(want_v).epsilon(1e-13));
}
