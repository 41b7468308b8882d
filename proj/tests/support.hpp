#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "qg/walk_model.hpp"

namespace qgtest {

// The symmetric three-jump walk: p(1,0) = p(-1,1) = p(0,-1) = 1/3.
inline qg::JumpKernel su3_kernel() {
    qg::JumpKernel k{};
    k.at(1, 0) = k.at(-1, 1) = k.at(0, -1) = 1.0 / 3.0;
    return k;
}

// The cartesian two-parameter subfamily: p(-1,1) = p(1,0) = mu,
// p(-1,0) = p(0,1) = p(1,-1) = nu with mu + nu = 1/3.
// Mixture of the two rotation-invariant jump triples; mu = 1/3 recovers the
// symmetric three-jump walk, and every member is harmonic for alpha=1, beta=0.
inline qg::JumpKernel cartesian_kernel(double mu) {
    double nu = 1.0 / 3.0 - mu;
    qg::JumpKernel k{};
    k.at(-1, 1) = k.at(1, 0) = k.at(0, -1) = mu;
    k.at(-1, 0) = k.at(0, 1) = k.at(1, -1) = nu;
    return k;
}

struct FamilySample {
    qg::CubicFamilyParams params;
    qg::JumpKernel kernel;
};

// Rejection sampler over the feasible parameter box; deterministic per seed.
inline std::vector<FamilySample> sample_family(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ua(0.5, 2.0), ub(-1.0, 1.0), up(0.0, 0.25),
        uq(0.0, 0.5);
    std::vector<FamilySample> out;
    out.reserve(count);
    while ((int)out.size() < count) {
        qg::CubicFamilyParams f{ua(rng), ub(rng), up(rng), uq(rng)};
        if (auto k = qg::try_kernel_from_cubic_family(f)) out.push_back({f, *k});
    }
    return out;
}

inline bool close(double got, double want, double tol) {
    return std::fabs(got - want) <= tol;
}

inline bool close_rel(double got, double want, double tol) {
    return std::fabs(got - want) <= tol * std::fabs(want);
}

}  // namespace qgtest
