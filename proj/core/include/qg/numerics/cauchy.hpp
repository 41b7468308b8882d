#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace qg::numerics {

// Taylor coefficients c_0..c_max_order of f at 0 by Cauchy's formula on a
// circle of the given radius:  c_m = (1/2*pi*i) * contour integral of
// f(z)/z^{m+1} dz, discretised with the trapezoid rule (spectrally accurate
// for periodic integrands).  The radius must stay well inside the first
// singularity of f.
std::vector<std::complex<double>> taylor_coefficients(
    const std::function<std::complex<double>(std::complex<double>)>& f,
    int max_order, double radius, int nodes = 256);

}  // namespace qg::numerics
