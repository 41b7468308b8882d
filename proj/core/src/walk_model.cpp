#include "qg/walk_model.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <sstream>

#include "qg/errors.hpp"

namespace qg {

namespace {

using rational = boost::multiprecision::cpp_rational;

constexpr double kProbTol = 1e-12;

// Continued-fraction reconstruction of a nearby small-denominator rational.
// Accepts only if |x - n/d| <= 1e-14 * max(1, |x|) with d <= 10^6.
std::optional<rational> to_small_rational(double x) {
    if (!std::isfinite(x)) return std::nullopt;
    const double tol = 1e-14 * std::max(1.0, std::fabs(x));
    std::int64_t p0 = 1, q0 = 0, p1 = 0, q1 = 1;  // convergents of the CF
    double v = x;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(v);
        if (fl > 9e17 || fl < -9e17) return std::nullopt;
        auto a = static_cast<std::int64_t>(fl);
        std::int64_t p2 = a * p0 + p1, q2 = a * q0 + q1;
        if (q2 > 1000000) return std::nullopt;
        p1 = p0; q1 = q0; p0 = p2; q0 = q2;
        double approx = static_cast<double>(p0) / static_cast<double>(q0);
        if (std::fabs(x - approx) <= tol) return rational(p0, q0);
        double frac = v - fl;
        if (frac < 1e-18) return std::nullopt;
        v = 1.0 / frac;
    }
    return std::nullopt;
}

// The six dependent probabilities of the cubic family, in declaration order
// (-1,0), (-1,1), (0,1), (1,-1), (0,-1), (-1,-1). Shared between the exact
// rational path and the floating-point path.
template <class R>
std::array<R, 6> family_closure(const R& a, const R& b, const R& p11, const R& p10) {
    const R d1 = a * (1 + 2 * a + b);
    const R d2 = 2 * a * (1 + 2 * a + b);
    const R d3 = 2 * (1 + 2 * a + b);
    const R d4 = 1 + 2 * a + b;

    std::array<R, 6> out;
    out[0] = -(a * (1 - 2 * a - b) + 8 * p11 + (4 - 3 * a + 2 * a * a + a * b) * p10) / d1;
    out[1] = (a * (1 - a - b) + 2 * (4 + 3 * a + 2 * a * a + a * b) * p11
              + 2 * (2 + a * a + a * b) * p10) / d2;
    out[2] = -(-(1 + a + b) + 4 * (2 + 2 * a + b) * p11 + 2 * (2 + a + b) * p10) / d3;
    out[3] = (a * a + (-1 + 2 * a - b) * p11 - (1 + b + 2 * a * a) * p10) / d4;
    out[4] = -((-1 - 3 * a - b + 4 * a * a) + 4 * (-2 + 2 * a - b) * p11
               + (-4 + 6 * a - 2 * b - 8 * a * a) * p10) / d3;
    out[5] = (a * (1 - 3 * a - b + 2 * a * a) + 2 * (4 - 3 * a + 2 * a * a - a * b) * p11
              + 2 * (2 - 3 * a + 3 * a * a - 2 * a * a * a) * p10) / d2;
    return out;
}

JumpKernel assemble(const CubicFamilyParams& f, const std::array<double, 6>& dep) {
    JumpKernel k;
    k.at(1, 1) = f.p11;
    k.at(1, 0) = f.p10;
    k.at(-1, 0) = dep[0];
    k.at(-1, 1) = dep[1];
    k.at(0, 1) = dep[2];
    k.at(1, -1) = dep[3];
    k.at(0, -1) = dep[4];
    k.at(-1, -1) = dep[5];
    return k;
}

std::string infeasible_message(const CubicFamilyParams& f, const char* reason) {
    std::ostringstream os;
    os << "cubic family (alpha=" << f.alpha << ", beta=" << f.beta << ", p11=" << f.p11
       << ", p10=" << f.p10 << ") infeasible: " << reason;
    return os.str();
}

}  // namespace

double JumpKernel::sum() const {
    double s = 0;
    for (auto [di, dj] : kJumps) s += at(di, dj);
    return s;
}

double JumpKernel::drift_x() const {
    double s = 0;
    for (auto [di, dj] : kJumps) s += di * at(di, dj);
    return s;
}

double JumpKernel::drift_y() const {
    double s = 0;
    for (auto [di, dj] : kJumps) s += dj * at(di, dj);
    return s;
}

ValidationReport validate_kernel(const JumpKernel& k) {
    ValidationReport rep;
    auto flag = [&rep](const char* code, const std::string& msg, double mag, bool warn) {
        (warn ? rep.warnings : rep.errors).push_back({code, msg, mag});
    };

    if (k.at(0, 0) != 0.0)
        flag("origin_jump", "p(0,0) must be zero", std::fabs(k.at(0, 0)), false);
    for (auto [di, dj] : kJumps) {
        double v = k.at(di, dj);
        std::ostringstream os;
        os << "p(" << di << "," << dj << ")";
        if (v < -kProbTol || v > 1 + kProbTol)
            flag("range", os.str() + " outside [0,1]", v, false);
        else if (v == 0.0)
            flag("zero_entry", os.str() + " is zero", 0.0, true);
    }
    if (double s = k.sum(); std::fabs(s - 1) > kProbTol)
        flag("normalisation", "probabilities do not sum to 1", std::fabs(s - 1), false);
    if (double mx = k.drift_x(); std::fabs(mx) > kProbTol)
        flag("drift_x", "horizontal drift is nonzero", std::fabs(mx), false);
    if (double my = k.drift_y(); std::fabs(my) > kProbTol)
        flag("drift_y", "vertical drift is nonzero", std::fabs(my), false);
    return rep;
}

double cubic_harmonic(double alpha, double beta, LatticePoint z) {
    return double(z.i) * double(z.j) * (z.i + alpha * z.j + beta);
}

double harmonicity_residual(const JumpKernel& k, double alpha, double beta, const Rect& rect) {
    // Accumulate in long double so the result reflects the residual of the
    // stored kernel itself, not evaluation noise; on [1,20]^2 the cubic
    // reaches ~2.5e4 and double accumulation alone would contribute ~1e-11.
    auto h = [&](int i, int j) -> long double {
        return (long double)(i) * j * (i + (long double)(alpha)*j + beta);
    };
    long double worst = 0;
    for (int i = rect.i_lo; i <= rect.i_hi; ++i) {
        for (int j = rect.j_lo; j <= rect.j_hi; ++j) {
            long double acc = -h(i, j);
            for (auto [di, dj] : kJumps) acc += (long double)(k.at(di, dj)) * h(i + di, j + dj);
            worst = std::max(worst, (long double)std::fabs((double)acc));
        }
    }
    return (double)worst;
}

JumpKernel kernel_from_cubic_family(const CubicFamilyParams& f) {
    // The family is empty outside alpha in [1/2, 2] (and reduces to a single
    // kernel at the endpoints), so reject early with a clean message.
    if (!(f.alpha >= 0.5 && f.alpha <= 2.0))
        throw infeasible_error(infeasible_message(f, "alpha outside [1/2, 2]"));
    if (f.alpha == 0.0 || 1 + 2 * f.alpha + f.beta == 0.0)
        throw infeasible_error(infeasible_message(f, "vanishing denominator"));

    auto ra = to_small_rational(f.alpha);
    auto rb = to_small_rational(f.beta);
    auto rp11 = to_small_rational(f.p11);
    auto rp10 = to_small_rational(f.p10);

    std::array<double, 6> dep;
    if (ra && rb && rp11 && rp10) {
        if (*rp11 < 0 || *rp10 < 0)
            throw infeasible_error(infeasible_message(f, "free probability below 0"));
        auto exact = family_closure<rational>(*ra, *rb, *rp11, *rp10);
        rational total = *rp11 + *rp10;
        for (std::size_t m = 0; m < 6; ++m) {
            if (exact[m] < 0)
                throw infeasible_error(infeasible_message(f, "dependent probability below 0"));
            total += exact[m];
            dep[m] = static_cast<double>(exact[m]);
        }
        if (total != 1)
            throw infeasible_error(infeasible_message(f, "probabilities do not sum to 1"));
    } else {
        if (f.p11 < -kProbTol || f.p10 < -kProbTol)
            throw infeasible_error(infeasible_message(f, "free probability below 0"));
        dep = family_closure<double>(f.alpha, f.beta, f.p11, f.p10);
        double total = f.p11 + f.p10;
        for (double& v : dep) {
            if (v < -kProbTol)
                throw infeasible_error(infeasible_message(f, "dependent probability below 0"));
            v = std::max(v, 0.0);
            total += v;
        }
        if (std::fabs(total - 1) > kProbTol)
            throw infeasible_error(infeasible_message(f, "probabilities do not sum to 1"));
    }
    return assemble(f, dep);
}

std::optional<JumpKernel> try_kernel_from_cubic_family(const CubicFamilyParams& f) {
    try {
        return kernel_from_cubic_family(f);
    } catch (const infeasible_error&) {
        return std::nullopt;
    }
}

std::optional<std::pair<double, double>> infer_cubic_params(const JumpKernel& k) {
    // Stencil residual of i*j*(i + alpha*j + beta) is linear in (alpha, beta):
    // R(i,j) = A(i,j) + alpha*B(i,j) + beta*C(i,j) with the pieces below.
    auto pieces = [&k](int i, int j, double& A, double& B, double& C) {
        A = -double(i) * i * j;
        B = -double(i) * j * j;
        C = -double(i) * j;
        for (auto [di, dj] : kJumps) {
            double w = k.at(di, dj);
            double ii = i + di, jj = j + dj;
            A += w * ii * ii * jj;
            B += w * ii * jj * jj;
            C += w * ii * jj;
        }
    };

    // Normal equations over a few interior stencils.
    const LatticePoint pts[] = {{1, 1}, {2, 1}, {1, 2}, {3, 2}, {2, 3}, {4, 4}};
    double bb = 0, bc = 0, cc = 0, ab = 0, ac = 0;
    for (auto z : pts) {
        double A, B, C;
        pieces(z.i, z.j, A, B, C);
        bb += B * B; bc += B * C; cc += C * C;
        ab += A * B; ac += A * C;
    }
    double det = bb * cc - bc * bc;
    if (std::fabs(det) < 1e-14) return std::nullopt;
    double alpha = (-ab * cc + ac * bc) / det;
    double beta = (-ac * bb + ab * bc) / det;

    if (harmonicity_residual(k, alpha, beta) > 1e-10) return std::nullopt;
    return std::make_pair(alpha, beta);
}

}  // namespace qg
