#pragma once

#include <complex>
#include <functional>

namespace qg::numerics {

struct QuadratureResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

// Globally adaptive Gauss-Kronrod 7-15 on [a, b] for complex-valued f.
// Bisects the interval with the largest K15-G7 discrepancy until the summed
// estimate drops below max(abs_tol, rel_tol * |I|), the piece count reaches
// max_intervals, or every remaining piece is narrower than min_width.
// initial_intervals seeds the subdivision with a uniform grid; a single
// starting panel can alias an oscillatory integrand badly enough that the
// K15-G7 discrepancy never sees the missing structure.
QuadratureResult integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                    double a, double b,
                                    double abs_tol, double rel_tol,
                                    int max_intervals = 2000,
                                    double min_width = 1e-10,
                                    int initial_intervals = 1);

}  // namespace qg::numerics
