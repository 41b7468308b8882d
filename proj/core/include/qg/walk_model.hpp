#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qg {

struct LatticePoint {
    int i = 0;
    int j = 0;
    friend bool operator==(LatticePoint a, LatticePoint b) { return a.i == b.i && a.j == b.j; }
};

// The eight admissible jumps, row-major over (di, dj), (0,0) excluded.
inline constexpr std::array<std::pair<int, int>, 8> kJumps = {{
    {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1},
}};

// One-step law of a homogeneous nearest-neighbour walk in the quarter plane.
// p[di+1][dj+1] is the probability of the increment (di, dj); p[1][1] stays 0.
struct JumpKernel {
    double p[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

    double at(int di, int dj) const { return p[di + 1][dj + 1]; }
    double& at(int di, int dj) { return p[di + 1][dj + 1]; }

    double sum() const;
    double drift_x() const;  // sum of di * p(di, dj)
    double drift_y() const;  // sum of dj * p(di, dj)
};

// Parameters (alpha, beta, p11, p10) selecting one member of the family of
// kernels for which i*j*(i + alpha*j + beta) is discrete harmonic.
struct CubicFamilyParams {
    double alpha = 1.0;
    double beta = 0.0;
    double p11 = 0.0;  // probability of (1, 1)
    double p10 = 0.0;  // probability of (1, 0)
};

struct ValidationIssue {
    std::string code;
    std::string message;
    double magnitude = 0.0;
};

struct ValidationReport {
    std::vector<ValidationIssue> errors;
    std::vector<ValidationIssue> warnings;  // zero entries, near-boundary parameters
    bool valid() const { return errors.empty(); }
};

struct Rect {
    int i_lo = 1, i_hi = 20;
    int j_lo = 1, j_hi = 20;
};

// Nonnegativity, normalisation and the two zero-drift constraints,
// each checked to 1e-12.
ValidationReport validate_kernel(const JumpKernel& k);

// The cubic h(i, j) = i*j*(i + alpha*j + beta).
double cubic_harmonic(double alpha, double beta, LatticePoint z);

// max over the rectangle of |sum_jumps p * h(z + jump) - h(z)|, with h
// evaluated as the plain cubic (it vanishes on both axes, which matches the
// zero extension at absorbed states).
double harmonicity_residual(const JumpKernel& k, double alpha, double beta,
                            const Rect& rect = {});

// Remaining six probabilities from (alpha, beta, p11, p10). Exact rational
// arithmetic is used when every input is recognisably rational with a small
// denominator; otherwise floating point with a 1e-12 feasibility tolerance.
// Throws infeasible_error outside the feasible polytope.
JumpKernel kernel_from_cubic_family(const CubicFamilyParams& f);

// Same construction, nullopt instead of a throw (for rejection sampling).
std::optional<JumpKernel> try_kernel_from_cubic_family(const CubicFamilyParams& f);

// Least-squares fit of (alpha, beta) from the harmonicity relation, accepted
// only if the residual on [1,20]^2 is below 1e-10. Returns nullopt for
// kernels that admit no cubic of this shape.
std::optional<std::pair<double, double>> infer_cubic_params(const JumpKernel& k);

}  // namespace qg
