#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qg/walk_model.hpp"

namespace qg {

// Truncated-lattice solve of g = e_{(i0,j0)} + g P on [1,n]^2 with killing
// outside the box.  extrapolate repeats the solve at 2n and reports the
// difference as the truncation error.
struct TruncationConfig {
    int n = 600;
    bool extrapolate = true;
    double solver_tol = 1e-12;  // residual infinity-norm
    int max_cycles = 200;
    bool use_cache = true;  // honoured when QG_ORACLE_CACHE_DIR is set
};

struct OracleSolution {
    int n = 0;  // reporting window [1,n]^2
    LatticePoint start;
    std::vector<double> value;    // row-major, index (j-1)*n + (i-1)
    std::vector<double> abs_err;  // |G_2n - G_n| per entry when extrapolated
    double solver_residual = 0;
    long cycles = 0;
    bool extrapolated = false;

    double at(int i, int j) const { return value[std::size_t(j - 1) * n + (i - 1)]; }
    double err_at(int i, int j) const { return abs_err[std::size_t(j - 1) * n + (i - 1)]; }
};

OracleSolution green_truncated(const JumpKernel& k, int i0, int j0,
                               const TruncationConfig& cfg = {});

// Absorption probabilities assembled from the Green grid:
//   h_i   = p_{1,-1} G_{i-1,1} + p_{0,-1} G_{i,1} + p_{-1,-1} G_{i+1,1}
//   ht_j  = p_{-1,1} G_{1,j-1} + p_{-1,0} G_{1,j} + p_{-1,-1} G_{1,j+1}
//   h_00  = p_{-1,-1} G_{1,1}
// with G taken as zero outside the window.
struct AbsorptionData {
    std::vector<double> h;        // h[i-1] = absorption at (i, 0), i = 1..n
    std::vector<double> h_tilde;  // absorption at (0, j)
    double h00 = 0;
    double mass_defect = 0;  // 1 - total absorbed mass in the window
};

AbsorptionData absorption_truncated(const JumpKernel& k, const OracleSolution& sol);

struct SimulationConfig {
    long paths = 100000;
    long step_cap = 1000000;
    std::uint64_t seed = 1;
    std::vector<LatticePoint> targets;
};

struct SimulationResult {
    struct Visits {
        LatticePoint target;
        double mean = 0;       // average visit count per path
        double std_error = 0;  // sample standard error of the mean
    };
    std::vector<Visits> visits;
    std::map<int, double> h;        // absorption frequency at (i, 0)
    std::map<int, double> h_tilde;  // absorption frequency at (0, j)
    double h00 = 0;
    double absorbed_fraction = 0;  // paths absorbed before the step cap
    long paths = 0;
};

SimulationResult simulate(const JumpKernel& k, int i0, int j0, const SimulationConfig& cfg);

// Residual of Q(x,y) G(x,y) = h(x) + ht(y) + h00 - x^{i0} y^{j0} with all
// series truncated at the oracle window; |x|, |y| < 1 required.
std::complex<double> functional_equation_residual(const JumpKernel& k,
                                                  const OracleSolution& sol,
                                                  const AbsorptionData& ab,
                                                  std::complex<double> x,
                                                  std::complex<double> y);

// Content-addressed grid cache. Key: FNV-1a over the kernel bits, start and
// n.  Directory from QG_ORACLE_CACHE_DIR; disabled when unset.
std::uint64_t kernel_hash(const JumpKernel& k);
std::optional<std::string> oracle_cache_dir();

}  // namespace qg
