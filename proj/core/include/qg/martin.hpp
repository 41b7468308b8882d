#pragma once

#include <limits>
#include <vector>

#include "qg/green_integral.hpp"
#include "qg/oracle.hpp"
#include "qg/uniformization.hpp"
#include "qg/walk_model.hpp"

namespace qg {

enum class MartinMethod {
    contour,
    oracle,
};

struct MartinConfig {
    LatticePoint ref{1, 1};
    // Direction slopes tan(gamma); 0 pins j = 2 and infinity pins i = 2, the
    // interior slopes walk the ray of that tangent.
    std::vector<double> directions{0.0, 0.5, 1.0, 2.0,
                                   std::numeric_limits<double>::infinity()};
    std::vector<int> radii{25, 50, 100};
    MartinMethod method = MartinMethod::contour;
    RayContour contour{};
    TruncationConfig truncation{};
    int threads = 1;
};

struct MartinDiagnostic {
    LatticePoint ref;
    std::vector<double> directions;
    std::vector<int> radii;
    // table[d][r]: Martin kernel at the lattice point of direction d, radius r.
    std::vector<std::vector<double>> table;
    double limit_prediction = 0;  // h(i0,j0) / h(ref)
    // max over directions of |table/limit - 1| at each radius
    std::vector<double> max_rel_deviation;
};

// Lattice point probed for a direction slope at a given radius.
LatticePoint direction_point(double slope, int radius);

// G^{(i0,j0)}(i,j) / G^{ref}(i,j). Propagates the two abs_error estimates and
// throws instability_error when the denominator is smaller than its own error
// bar. The oracle method pulls both values from truncated-lattice solves.
double martin_kernel(const JumpKernel& k, const UniformizationData& u, int i0, int j0,
                     LatticePoint ref, int i, int j,
                     MartinMethod method = MartinMethod::contour,
                     const RayContour& contour = {},
                     const TruncationConfig& truncation = {});

// Kernel table over directions x radii, compared against the common limit
// h(i0,j0)/h(ref). Evidence for the one-point boundary, not a proof of it.
MartinDiagnostic martin_limit_diagnostic(const JumpKernel& k, const UniformizationData& u,
                                         double alpha, double beta, int i0, int j0,
                                         const MartinConfig& cfg = {});

}  // namespace qg
