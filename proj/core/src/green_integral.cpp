#include "qg/green_integral.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "qg/errors.hpp"
#include "qg/numerics/quadrature.hpp"

namespace qg {

namespace {

constexpr double kThetaLo = 2.0 * M_PI / 3.0 + 0.01;
constexpr double kThetaHi = M_PI - 0.01;

double wrap_angle(double a) {
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a <= -M_PI) a += 2.0 * M_PI;
    return a;
}

// Directions (args) of every pole of the six orbit terms: preimages of the
// poles of x and y under each group element.
std::vector<double> pole_directions(const UniformizationData& u) {
    const cplx k2 = u.K * u.K;
    const cplx poles[4] = {u.z0, 1.0 / u.z0, u.K * u.z2, u.K / u.z2};
    std::vector<double> dirs;
    dirs.reserve(24);
    for (const cplx& p : poles) {
        const cplx pre[6] = {p, 1.0 / p, k2 / p, p / k2, k2 * p, 1.0 / (k2 * p)};
        for (const cplx& z : pre) dirs.push_back(std::arg(z));
    }
    return dirs;
}

double min_angular_gap(double theta, const std::vector<double>& dirs) {
    double gap = M_PI;
    for (double d : dirs) gap = std::min(gap, std::fabs(wrap_angle(theta - d)));
    return gap;
}

// Steepest-descent angle clamped into the admissible sector and nudged off
// pole directions of the integrand.
double resolve_theta(const UniformizationData& u, double slope) {
    double theta = std::arg(rho(u, slope));
    theta = std::clamp(theta, kThetaLo, kThetaHi);
    const std::vector<double> dirs = pole_directions(u);
    if (min_angular_gap(theta, dirs) >= 0.02) return theta;

    double best = theta, best_gap = min_angular_gap(theta, dirs);
    for (int step = 1; step <= 60; ++step) {
        for (double cand : {theta + 0.01 * step, theta - 0.01 * step}) {
            if (cand < kThetaLo || cand > kThetaHi) continue;
            double gap = min_angular_gap(cand, dirs);
            if (gap >= 0.02) return cand;
            if (gap > best_gap) {
                best_gap = gap;
                best = cand;
            }
        }
    }
    return best;
}

struct IntegrandContext {
    const UniformizationData& u;
    CurvePolynomials cp;
    std::array<GroupElement, 6> w;
    int i0, j0, i, j;

    IntegrandContext(const JumpKernel& k, const UniformizationData& u_, int i0_, int j0_,
                     int i_, int j_)
        : u(u_), cp(curve_polynomials(k)), w(group_elements(u_.K)),
          i0(i0_), j0(j0_), i(i_), j(j_) {}

    cplx operator()(cplx z) const {
        cplx orbit = 0;
        for (const GroupElement& g : w) {
            cplx wz = g(z);
            orbit += double(g.sign) * ipow(x_of_z(u, wz), i0) * ipow(y_of_z(u, wz), j0);
        }
        const cplx xz = x_of_z(u, z);
        const cplx yz = y_of_z(u, z);
        const cplx dq = 2.0 * cp.a(xz) * yz + cp.b(xz);
        const double scale = std::abs(2.0 * cp.a(xz) * yz) + std::abs(cp.b(xz));
        if (std::abs(dq) < 1e-13 * (scale + 1e-30)) {
            std::ostringstream os;
            os << "green integrand: dQ/dy vanishes at z = (" << z.real() << ", " << z.imag()
               << ")";
            throw pole_error(os.str());
        }
        // Reciprocal powers so the far tail underflows cleanly: |x|, |y| > 1
        // along the admissible rays.
        return -orbit * x_prime(u, z) / dq * ipow(1.0 / xz, i) * ipow(1.0 / yz, j);
    }
};

}  // namespace

SeriesCoefficients nu_coefficients(const UniformizationData& u, double slope, int max_order) {
    SeriesCoefficients sc;
    sc.slope = slope;
    sc.nu.resize(max_order);
    // t_p = z^p + z^-p obeys t_{p+1} = s t_p - t_{p-1} with t_0 = 2, t_1 = s,
    // so every term is a polynomial in the branch-free sums s_k.
    double t[4][2] = {{2, u.s0}, {2, u.s1}, {2, u.s2}, {2, u.s3}};
    const double s[4] = {u.s0, u.s1, u.s2, u.s3};
    cplx kp = 1.0;
    for (int p = 1; p <= max_order; ++p) {
        kp *= u.K;
        sc.nu[p - 1] =
            ((t[0][1] - t[1][1]) + slope * (t[2][1] - t[3][1]) / kp) / double(p);
        for (int m = 0; m < 4; ++m) {
            double next = s[m] * t[m][1] - t[m][0];
            t[m][0] = t[m][1];
            t[m][1] = next;
        }
    }
    return sc;
}

cplx rho(const UniformizationData& u, double slope) {
    const cplx nu1 = u.omega_x + slope * u.omega_y / u.K;
    return 1.0 / nu1;
}

cplx green_integrand(const JumpKernel& k, const UniformizationData& u,
                     int i0, int j0, int i, int j, cplx z) {
    return IntegrandContext(k, u, i0, j0, i, j)(z);
}

GreenEstimate green_value(const JumpKernel& k, const UniformizationData& u,
                          int i0, int j0, int i, int j, const RayContour& contour) {
    if (i0 < 1 || j0 < 1 || i < 1 || j < 1)
        throw std::invalid_argument("green_value: start and target must be interior points");

    const double slope = double(j) / double(i);
    const double theta =
        std::isfinite(contour.theta) ? contour.theta : resolve_theta(u, slope);
    const cplx ray = std::polar(1.0, theta);
    const IntegrandContext f(k, u, i0, j0, i, j);

    auto integrand_t = [&](double t) -> cplx {
        const double om = 1.0 - t;
        const cplx z = ray * (t / om);
        return f(z) * ray / (om * om);
    };

    // Seed well past the oscillation budget of the orbit factor, which winds
    // faster as the start point moves away from the corner; one starting
    // panel can alias the central bump into a wildly wrong "converged" value.
    const int seed_panels = 32 + 16 * (i0 + j0);
    const double two_pi = 2.0 * M_PI;
    auto quad = numerics::integrate_adaptive(integrand_t, 0.0, 1.0,
                                             contour.abs_tol * two_pi,
                                             contour.rel_tol, contour.max_intervals,
                                             1e-10, seed_panels);
    if (!quad.converged) {
        std::ostringstream os;
        os << "green_value(" << i0 << "," << j0 << " -> " << i << "," << j
           << "): quadrature stalled at error " << quad.error_estimate / two_pi
           << " after " << quad.evaluations << " evaluations (theta = " << theta << ")";
        throw nonconvergence_error(os.str());
    }

    const cplx g = quad.value / cplx(0.0, two_pi);
    GreenEstimate est;
    est.value = g.real();
    est.imag_residual = std::fabs(g.imag());
    est.abs_error = quad.error_estimate / two_pi;
    est.method = GreenEstimate::Method::contour;
    est.theta = theta;
    est.evaluations = quad.evaluations;

    // Conjugation symmetry forces a real value; complain only above the
    // quadrature's own floor.
    if (est.imag_residual > 1e-6 * std::fabs(est.value) &&
        est.imag_residual > 3.0 * est.abs_error + 1e-15) {
        std::ostringstream os;
        os << "green_value(" << i0 << "," << j0 << " -> " << i << "," << j
           << "): imaginary residual " << est.imag_residual << " vs value " << est.value;
        throw nonreal_error(os.str());
    }
    if (est.value < -est.abs_error - 1e-15) {
        std::ostringstream os;
        os << "green_value(" << i0 << "," << j0 << " -> " << i << "," << j
           << "): negative value " << est.value << " beyond error bar " << est.abs_error;
        throw nonreal_error(os.str());
    }
    return est;
}

std::vector<GreenEstimate> green_grid(const JumpKernel& k, const UniformizationData& u,
                                      int i0, int j0, const std::vector<LatticePoint>& targets,
                                      const RayContour& contour, int threads) {
    std::vector<GreenEstimate> out(targets.size());
    const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(targets.size())));
    if (n_threads == 1) {
        for (std::size_t m = 0; m < targets.size(); ++m)
            out[m] = green_value(k, u, i0, j0, targets[m].i, targets[m].j, contour);
        return out;
    }

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n_threads);
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t m = t; m < targets.size(); m += n_threads)
                    out[m] = green_value(k, u, i0, j0, targets[m].i, targets[m].j, contour);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace qg
