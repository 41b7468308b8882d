#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "qg/oracle.hpp"
#include "support.hpp"

using namespace qg;

namespace {

TruncationConfig small_cfg(int n, bool extrapolate = false) {
    TruncationConfig cfg;
    cfg.n = n;
    cfg.extrapolate = extrapolate;
    cfg.use_cache = false;
    return cfg;
}

}  // namespace

TEST_CASE("truncated solve meets its residual target") {
    OracleSolution sol = green_truncated(qgtest::su3_kernel(), 1, 1, small_cfg(128));
    CHECK(sol.solver_residual <= 1e-12);
    CHECK(sol.cycles > 0);
    CHECK(!sol.extrapolated);
    CHECK(sol.n == 128);
    CHECK(sol.at(1, 1) > 1.0);  // includes the visit at time zero
}

TEST_CASE("doubling the box grows every entry and fills the error field") {
    JumpKernel k = qgtest::su3_kernel();
    OracleSolution fine = green_truncated(k, 1, 1, small_cfg(100));
    OracleSolution wide = green_truncated(k, 1, 1, small_cfg(100, true));
    CHECK(wide.extrapolated);
    for (auto [i, j] : {std::pair{1, 1}, {5, 3}, {20, 20}, {60, 60}}) {
        CHECK(wide.at(i, j) >= fine.at(i, j) - 1e-9);
        CHECK(wide.err_at(i, j) >= 0.0);
    }
    // Far from the start the truncation bite is visible and the doubled box
    // must add mass.
    CHECK(wide.at(90, 90) > fine.at(90, 90));
}

TEST_CASE("absorption rows follow the one-step identities") {
    JumpKernel k = qgtest::su3_kernel();
    OracleSolution sol = green_truncated(k, 1, 1, small_cfg(150));
    AbsorptionData ab = absorption_truncated(k, sol);
    // Only the (0,-1) jump reaches the horizontal axis for this walk.
    for (int i : {1, 2, 7, 40}) CHECK(ab.h[i - 1] == doctest::Approx(sol.at(i, 1) / 3.0).epsilon(1e-15));
    // Only the (-1, 1)... the vertical axis is reached by (-1, 0) and (-1, 1)
    // jumps; here only (-1, 1) has mass and it lands at (0, j+1).
    for (int j : {2, 3, 9}) CHECK(ab.h_tilde[j - 1] == doctest::Approx(sol.at(1, j - 1) / 3.0).epsilon(1e-15));
    CHECK(ab.h00 == 0.0);
    CHECK(ab.mass_defect > 0.0);
    CHECK(ab.mass_defect < 1e-5);
}

TEST_CASE("mass defect shrinks as the box grows") {
    JumpKernel k = qgtest::sample_family(21, 1)[0].kernel;
    double d_small = absorption_truncated(k, green_truncated(k, 2, 2, small_cfg(100))).mass_defect;
    double d_large = absorption_truncated(k, green_truncated(k, 2, 2, small_cfg(200))).mass_defect;
    CHECK(d_large < d_small);
}

TEST_CASE("generating functions balance the kernel equation at an interior point") {
    JumpKernel k = qgtest::su3_kernel();
    OracleSolution sol = green_truncated(k, 1, 1, small_cfg(150));
    AbsorptionData ab = absorption_truncated(k, sol);
    CHECK(std::abs(functional_equation_residual(k, sol, ab, {0.5, 0.0}, {0.4, 0.0})) <= 1e-9);
    CHECK(std::abs(functional_equation_residual(k, sol, ab, {-0.3, 0.2}, {0.1, 0.5})) <= 1e-9);
}

TEST_CASE("simulation agrees with the solver within sampling error") {
    JumpKernel k = qgtest::su3_kernel();
    OracleSolution sol = green_truncated(k, 1, 1, small_cfg(200));
    AbsorptionData ab = absorption_truncated(k, sol);
    SimulationConfig cfg;
    cfg.paths = 60000;
    cfg.seed = 20260822;
    cfg.targets = {{1, 1}, {2, 2}};
    SimulationResult sim = simulate(k, 1, 1, cfg);
    CHECK(sim.paths == cfg.paths);
    CHECK(sim.absorbed_fraction > 0.999);
    for (const auto& v : sim.visits) {
        double want = sol.at(v.target.i, v.target.j);
        CHECK(std::fabs(v.mean - want) <= 5.0 * v.std_error + 1e-3);
    }
    CHECK(std::fabs(sim.h.at(1) - ab.h[0]) <= 5e-3);
    CHECK(sim.h00 == 0.0);
}

TEST_CASE("same seed same paths, different seed different paths") {
    JumpKernel k = qgtest::su3_kernel();
    SimulationConfig cfg;
    cfg.paths = 2000;
    cfg.seed = 5;
    cfg.targets = {{1, 1}};
    SimulationResult a = simulate(k, 1, 1, cfg);
    SimulationResult b = simulate(k, 1, 1, cfg);
    CHECK(a.visits[0].mean == b.visits[0].mean);
    cfg.seed = 6;
    SimulationResult c = simulate(k, 1, 1, cfg);
    CHECK(a.visits[0].mean != c.visits[0].mean);
}

TEST_CASE("grid cache stores and replays solves") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "qg_oracle_cache_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    setenv("QG_ORACLE_CACHE_DIR", dir.string().c_str(), 1);

    REQUIRE(oracle_cache_dir().has_value());
    TruncationConfig cfg;
    cfg.n = 64;
    cfg.extrapolate = false;
    cfg.use_cache = true;
    JumpKernel k = qgtest::su3_kernel();
    OracleSolution first = green_truncated(k, 1, 1, cfg);
    CHECK(first.cycles > 0);
    OracleSolution second = green_truncated(k, 1, 1, cfg);
    CHECK(second.cycles == 0);  // served from disk
    CHECK(second.at(3, 2) == first.at(3, 2));
    CHECK(!fs::is_empty(dir));

    unsetenv("QG_ORACLE_CACHE_DIR");
    CHECK(!oracle_cache_dir().has_value());
    fs::remove_all(dir);
}

TEST_CASE("kernel hash separates kernels and ignores nothing") {
    JumpKernel a = qgtest::su3_kernel();
    JumpKernel b = a;
    CHECK(kernel_hash(a) == kernel_hash(b));
    b.at(1, 0) += 1e-12;
    CHECK(kernel_hash(a) != kernel_hash(b));
}
