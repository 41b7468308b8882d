#include "qg/numerics/cauchy.hpp"

#include <cmath>

namespace qg::numerics {

std::vector<std::complex<double>> taylor_coefficients(
    const std::function<std::complex<double>(std::complex<double>)>& f,
    int max_order, double radius, int nodes) {
    using cd = std::complex<double>;
    std::vector<cd> samples(nodes);
    for (int m = 0; m < nodes; ++m) {
        double phi = 2.0 * M_PI * m / nodes;
        samples[m] = f(std::polar(radius, phi));
    }
    std::vector<cd> coeff(max_order + 1);
    for (int p = 0; p <= max_order; ++p) {
        cd acc = 0;
        for (int m = 0; m < nodes; ++m) {
            double phi = -2.0 * M_PI * m * p / nodes;
            acc += samples[m] * cd(std::cos(phi), std::sin(phi));
        }
        coeff[p] = acc / (double(nodes) * std::pow(radius, p));
    }
    return coeff;
}

}  // namespace qg::numerics
