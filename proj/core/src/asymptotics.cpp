#include "qg/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qg/errors.hpp"
#include "qg/green_integral.hpp"

namespace qg {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt27 = std::pow(3.0, 1.5);

cplx sqrt_disc_x(const JumpKernel& k) {
    double disc = k.at(1, 0) * k.at(1, 0) - 4.0 * k.at(1, 1) * k.at(1, -1);
    return std::sqrt(cplx(disc, 0.0));
}

// Prefactor of the two-term bracket; its leading term reproduces the
// assembled C exactly, which ties the two evaluation paths together.
cplx bracket_prefactor(const AsymptoticPieces& p) {
    return -p.z0_minus_inv * kSqrt27 * p.alpha * p.omega_x * p.omega_x /
           (4.0 * kPi * p.sqrt_disc_x);
}

}  // namespace

double constant_C(const JumpKernel& k, const UniformizationData& u, double alpha,
                  bool* sign_flipped, AsymptoticPieces* pieces) {
    AsymptoticPieces p;
    p.z0_minus_inv = u.z0 - 1.0 / u.z0;
    p.sqrt_disc_x = sqrt_disc_x(k);
    p.omega_x = u.omega_x;
    p.alpha = alpha;

    cplx assembled = cplx(0.0, 1.0) * p.z0_minus_inv * 27.0 * alpha * alpha /
                     (2.0 * kPi * p.sqrt_disc_x * p.omega_x);
    if (std::abs(assembled.imag()) > 1e-8 * std::abs(assembled)) {
        std::ostringstream os;
        os << "constant C came out non-real: " << assembled.real() << " + "
           << assembled.imag() << "i";
        throw gate_error(os.str());
    }
    double c = assembled.real();
    if (c == 0.0 || !std::isfinite(c)) throw gate_error("constant C vanished or overflowed");

    bool flipped = c < 0.0;
    if (flipped) c = -c;
    if (sign_flipped) *sign_flipped = flipped;
    if (pieces) *pieces = p;
    return c;
}

AsymptoticModel make_asymptotic_model(const JumpKernel& k, const UniformizationData& u,
                                      double alpha, double beta, GateLevel gate) {
    AsymptoticModel m;
    m.alpha = alpha;
    m.beta = beta;
    m.C = constant_C(k, u, alpha, &m.sign_flipped, &m.pieces);
    m.gate_ratio = std::numeric_limits<double>::quiet_NaN();

    if (gate == GateLevel::empirical) {
        const int probe = 100;
        double lead = green_asymptotic(m, 1, 1, probe, probe);
        double g = green_value(k, u, 1, 1, probe, probe).value;
        m.gate_ratio = g / lead;
        if (!(std::abs(m.gate_ratio - 1.0) <= 0.10)) {
            std::ostringstream os;
            os << "constant C fails the empirical gate: contour/closed-form ratio "
               << m.gate_ratio << " at (" << probe << ", " << probe << ")";
            throw gate_error(os.str());
        }
    }
    return m;
}

double green_asymptotic(const AsymptoticModel& m, int i0, int j0, int i, int j) {
    double h0 = cubic_harmonic(m.alpha, m.beta, {i0, j0});
    double di = i, dj = j;
    double denom = di * di + m.alpha * di * dj + m.alpha * m.alpha * dj * dj;
    return m.C * h0 * di * dj * (di + m.alpha * dj) / (denom * denom * denom);
}

double green_asymptotic_two_term(const AsymptoticModel& m, const UniformizationData& u,
                                 int i0, int j0, int i, int j) {
    double h0 = cubic_harmonic(m.alpha, m.beta, {i0, j0});
    double slope = double(j) / double(i);
    cplx r = rho(u, slope);
    cplx nu2 = nu_coefficients(u, slope, 2).nu[1];

    cplx r_over_i = r / double(i);
    cplx head = 2.0 * r_over_i * r_over_i * r_over_i;
    cplx corr = 24.0 * nu2 * ipow(r, 5) / std::pow(double(i), 4);
    cplx t = head - corr;
    cplx bracket = t - std::conj(t);

    double val = (bracket_prefactor(m.pieces) * bracket).real() * h0;
    return m.sign_flipped ? -val : val;
}

double absorption_asymptotic(const AsymptoticModel& m, const JumpKernel& k, int i0, int j0,
                             BoundarySide side, int i) {
    double h0 = cubic_harmonic(m.alpha, m.beta, {i0, j0});
    double factor;
    if (side == BoundarySide::horizontal) {
        factor = k.at(1, -1) + k.at(0, -1) + k.at(-1, -1);
    } else {
        factor = (k.at(-1, 1) + k.at(-1, 0) + k.at(-1, -1)) / std::pow(m.alpha, 5);
    }
    double di = i;
    return m.C * factor * h0 / (di * di * di * di);
}

cplx orbit_cubic_coefficient(const UniformizationData& u, double alpha, double beta,
                             int i0, int j0) {
    double h0 = cubic_harmonic(alpha, beta, {i0, j0});
    double om3 = u.omega_x * u.omega_x * u.omega_x;
    return cplx(0.0, kSqrt27 / 2.0) * alpha * om3 * h0;
}

}  // namespace qg
