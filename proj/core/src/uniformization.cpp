#include "qg/uniformization.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qg/errors.hpp"

namespace qg {

namespace {

// s = 2(2 - r1 - r4)/(r4 - r1) and 2(r1 + r4 - 2 r1 r4)/(r4 - r1), with the
// r4 -> infinity limits -2 and 2(1 - 2 r1).
std::pair<double, double> pole_zero_sums(double r1, ExtendedReal r4) {
    if (r4.is_inf) return {-2.0, 2.0 * (1.0 - 2.0 * r1)};
    double den = r4.value - r1;
    return {2.0 * (2.0 - r1 - r4.value) / den,
            2.0 * (r1 + r4.value - 2.0 * r1 * r4.value) / den};
}

// Root of z + 1/z = s.  For |s| <= 2 the roots are conjugate unimodular and
// the half-plane picks one; for real roots the stable form returns the one
// with |z| >= 1.  Near |s| = 2 the root is a near-double root and the square
// root would amplify last-ulp noise in s to ~1e-8, so snap to +-1 there.
cplx root_from_sum(double s, bool upper_half) {
    if (std::fabs(std::fabs(s) - 2.0) < 32.0 * std::numeric_limits<double>::epsilon())
        return {s > 0 ? 1.0 : -1.0, 0.0};
    if (std::fabs(s) <= 2.0) {
        double im = std::sqrt(std::max(0.0, 4.0 - s * s)) / 2.0;
        return {s / 2.0, upper_half ? im : -im};
    }
    double t = (s > 0 ? s + std::sqrt(s * s - 4.0) : s - std::sqrt(s * s - 4.0)) / 2.0;
    return {t, 0.0};
}

cplx quadratic_at(const Quadratic& q, double t) { return cplx(q(t), 0.0); }

}  // namespace

cplx ipow(cplx base, long n) {
    if (n < 0) return 1.0 / ipow(base, -n);
    cplx acc = 1.0, sq = base;
    while (n > 0) {
        if (n & 1) acc *= sq;
        sq *= sq;
        n >>= 1;
    }
    return acc;
}

cplx x_of_z(const UniformizationData& u, cplx z) {
    return (z * z - u.s1 * z + 1.0) / (z * z - u.s0 * z + 1.0);
}

cplx y_of_z(const UniformizationData& u, cplx z) {
    const cplx k2 = u.K * u.K;
    return (z * z - u.K * u.s3 * z + k2) / (z * z - u.K * u.s2 * z + k2);
}

cplx x_prime(const UniformizationData& u, cplx z) {
    cplx den = z * z - u.s0 * z + 1.0;
    return u.omega_x * (1.0 - z * z) / (den * den);
}

UniformizationData uniformize(const JumpKernel& k) {
    UniformizationData u;
    u.bp = branch_points(k);

    auto [s0, s1] = pole_zero_sums(u.bp.x1, u.bp.x4);
    auto [s2, s3] = pole_zero_sums(u.bp.y1, u.bp.y4);
    u.s0 = s0; u.s1 = s1; u.s2 = s2; u.s3 = s3;
    u.omega_x = s0 - s1;
    u.omega_y = s2 - s3;
    if (!(u.omega_x < 0) || !(u.omega_y < 0))
        throw degenerate_curve_error("uniformization: omega_x, omega_y must be negative");
    u.alpha_ratio = u.omega_y / u.omega_x;

    // K + 1/K = (sqrt(at(y1)) s1 + sqrt(ct(y1)) s0) / (sqrt(at(y1)) + sqrt(ct(y1))).
    // at(y1) and ct(y1) share a sign because ct/at = x(K)^2 on the curve, so
    // the principal square roots keep the ratio real.
    const CurvePolynomials cp = curve_polynomials(k);
    const cplx ra = std::sqrt(quadratic_at(cp.at, u.bp.y1));
    const cplx rc = std::sqrt(quadratic_at(cp.ct, u.bp.y1));
    const cplx denom = ra + rc;
    if (std::abs(denom) < 1e-14)
        throw degenerate_curve_error("uniformization: sqrt(at(y1)) + sqrt(ct(y1)) vanishes");
    const cplx sk = (ra * u.s1 + rc * u.s0) / denom;
    if (std::fabs(sk.imag()) > 1e-9 * (1.0 + std::abs(sk)))
        throw branch_error("uniformization: K + 1/K came out non-real");

    const double s_k = sk.real();
    if (std::fabs(s_k) > 2.0 + 1e-12)
        throw branch_error("uniformization: |K| != 1, group is not of order six");
    const double im = std::sqrt(std::max(0.0, 4.0 - s_k * s_k)) / 2.0;
    u.K = {s_k / 2.0, -im};  // Im(K) <= 0 selection

    u.z0 = root_from_sum(u.s0, false);
    u.z1 = root_from_sum(u.s1, false);
    u.z2 = root_from_sum(u.s2, true);
    u.z3 = root_from_sum(u.s3, true);

    // Gates: the critical points must land on the branch points and the maps
    // must stay on the curve.
    auto check_close = [](cplx got, double want, const char* what) {
        if (std::abs(got - want) > 1e-8 * (1.0 + std::fabs(want))) {
            std::ostringstream os;
            os << "uniformization gate: " << what << " = " << got.real();
            if (std::fabs(got.imag()) > 0) os << " + " << got.imag() << "i";
            os << ", expected " << want;
            throw branch_error(os.str());
        }
    };
    check_close(x_of_z(u, 1.0), u.bp.x1, "x(1)");
    check_close(y_of_z(u, u.K), u.bp.y1, "y(K)");
    if (!u.bp.x4.is_inf) check_close(x_of_z(u, -1.0), u.bp.x4.value, "x(-1)");
    else check_close(1.0 / x_of_z(u, -1.0), 0.0, "1/x(-1)");
    if (!u.bp.y4.is_inf) check_close(y_of_z(u, -u.K), u.bp.y4.value, "y(-K)");
    else check_close(1.0 / y_of_z(u, -u.K), 0.0, "1/y(-K)");

    if (double res = verify_on_curve(k, u, 64); res > 1e-9) {
        std::ostringstream os;
        os << "uniformization gate: on-curve residual " << res;
        throw branch_error(os.str());
    }
    return u;
}

double verify_on_curve(const JumpKernel& k, const UniformizationData& u, int samples,
                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const cplx poles[4] = {u.z0, 1.0 / u.z0, u.K * u.z2, u.K / u.z2};

    double worst = 0.0;
    int kept = 0;
    while (kept < samples) {
        // log-uniform modulus in [0.2, 5], uniform angle
        double r = 0.2 * std::pow(25.0, unif(rng));
        double phi = 2.0 * M_PI * unif(rng);
        cplx z = std::polar(r, phi);
        bool near_pole = false;
        for (const cplx& p : poles)
            if (std::abs(z - p) < 0.05) near_pole = true;
        if (near_pole) continue;
        ++kept;
        cplx x = x_of_z(u, z), y = y_of_z(u, z);
        double rx = std::abs(x), ry = std::abs(y);
        // all monomials of Q with magnitudes in place of x, y
        double scale = (q_eval(k, cplx(rx), cplx(ry)) + 2.0 * rx * ry).real();
        worst = std::max(worst, std::abs(q_eval(k, x, y)) / scale);
    }
    return worst;
}

std::array<GroupElement, 6> group_elements(cplx K) {
    const cplx k2 = K * K;
    return {{
        {"1", 0, +1, 1, 0, 0, 1},
        {"xi", 1, -1, 0, 1, 1, 0},        // 1/z
        {"eta", 1, -1, 0, k2, 1, 0},      // K^2/z
        {"eta.xi", 2, +1, k2, 0, 0, 1},   // K^2 z
        {"xi.eta", 2, +1, 1, 0, 0, k2},   // z/K^2
        {"xi.eta.xi", 3, -1, 0, 1, k2, 0} // 1/(K^2 z)
    }};
}

cplx orbit_sum(const UniformizationData& u, int i0, int j0, cplx z) {
    cplx acc = 0;
    for (const GroupElement& w : group_elements(u.K)) {
        cplx wz = w(z);
        acc += double(w.sign) * ipow(x_of_z(u, wz), i0) * ipow(y_of_z(u, wz), j0);
    }
    return acc;
}

double min_pole_radius(const UniformizationData& u) {
    // Poles of x are z0, 1/z0; of y are K z2, K/z2.  Preimages under the
    // group only swap moduli with their reciprocals.
    double m0 = std::abs(u.z0), m2 = std::abs(u.z2);
    double r = std::min(std::min(m0, 1.0 / m0), std::min(m2, 1.0 / m2));
    return r;
}

}  // namespace qg
