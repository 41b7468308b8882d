#include <cmath>
#include <limits>

#include "doctest.h"
#include "qg/martin.hpp"
#include "qg/uniformization.hpp"
#include "support.hpp"

using namespace qg;

TEST_CASE("direction points pin the stated coordinates") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(direction_point(0.0, 50) == LatticePoint{50, 2});
    CHECK(direction_point(inf, 50) == LatticePoint{2, 50});
    CHECK(direction_point(1.0, 50) == LatticePoint{50, 50});
    CHECK(direction_point(0.5, 50) == LatticePoint{50, 25});
    CHECK(direction_point(2.0, 50) == LatticePoint{25, 50});
    CHECK(direction_point(2.0, 3) == LatticePoint{2, 3});  // rounds but stays interior
}

TEST_CASE("kernel at the reference start is exactly one and repeatable") {
    JumpKernel k = qgtest::su3_kernel();
    UniformizationData u = uniformize(k);
    CHECK(martin_kernel(k, u, 2, 3, {2, 3}, 2, 3) == 1.0);
    double a = martin_kernel(k, u, 1, 1, {1, 1}, 7, 5);
    double b = martin_kernel(k, u, 1, 1, {1, 1}, 7, 5);
    CHECK(a == b);
    CHECK(a > 0.0);
}

TEST_CASE("contour and lattice methods agree on a nearby point") {
    JumpKernel k = qgtest::su3_kernel();
    UniformizationData u = uniformize(k);
    TruncationConfig cfg;
    cfg.n = 200;
    cfg.extrapolate = true;
    cfg.use_cache = false;
    double a = martin_kernel(k, u, 2, 3, {1, 1}, 6, 4, MartinMethod::contour);
    double b = martin_kernel(k, u, 2, 3, {1, 1}, 6, 4, MartinMethod::oracle, {}, cfg);
    CHECK(qgtest::close_rel(b, a, 1e-6));
}

TEST_CASE("diagnostic converges to the harmonic ratio for the symmetric walk") {
    JumpKernel k = qgtest::su3_kernel();
    UniformizationData u = uniformize(k);
    MartinConfig cfg;
    cfg.threads = 2;
    MartinDiagnostic d = martin_limit_diagnostic(k, u, 1.0, 0.0, 2, 3, cfg);
    CHECK(d.limit_prediction == doctest::Approx(15.0).epsilon(1e-12));
    REQUIRE(d.table.size() == cfg.directions.size());
    REQUIRE(d.max_rel_deviation.size() == cfg.radii.size());
    // Deviations shrink with radius and end small.
    CHECK(d.max_rel_deviation[1] < d.max_rel_deviation[0]);
    CHECK(d.max_rel_deviation[2] < d.max_rel_deviation[1]);
    CHECK(d.max_rel_deviation[2] <= 0.01);
}

TEST_CASE("diagnostic on a family kernel stays near its own prediction") {
    auto s = qgtest::sample_family(17, 1)[0];
    UniformizationData u = uniformize(s.kernel);
    MartinConfig cfg;
    cfg.radii = {20, 40};
    cfg.directions = {0.5, 1.0, 2.0};
    MartinDiagnostic d =
        martin_limit_diagnostic(s.kernel, u, s.params.alpha, s.params.beta, 1, 2, cfg);
    double want = cubic_harmonic(s.params.alpha, s.params.beta, {1, 2}) /
                  cubic_harmonic(s.params.alpha, s.params.beta, {1, 1});
    CHECK(d.limit_prediction == doctest::Approx(want).epsilon(1e-12));
    CHECK(d.max_rel_deviation.back() <= 0.05);
}
