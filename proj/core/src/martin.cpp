#include "qg/martin.hpp"

#include <cmath>
#include <sstream>

#include "qg/errors.hpp"

namespace qg {

namespace {

double checked_ratio(double num, double den, double den_err) {
    if (!(den > den_err)) {
        std::ostringstream os;
        os << "martin kernel denominator " << den << " is below its error bar " << den_err;
        throw instability_error(os.str());
    }
    return num / den;
}

}  // namespace

LatticePoint direction_point(double slope, int radius) {
    if (slope == 0.0) return {radius, 2};
    if (std::isinf(slope)) return {2, radius};
    if (slope <= 1.0) {
        int j = static_cast<int>(std::lround(slope * radius));
        return {radius, std::max(1, j)};
    }
    int i = static_cast<int>(std::lround(radius / slope));
    return {std::max(1, i), radius};
}

double martin_kernel(const JumpKernel& k, const UniformizationData& u, int i0, int j0,
                     LatticePoint ref, int i, int j, MartinMethod method,
                     const RayContour& contour, const TruncationConfig& truncation) {
    if (i0 == ref.i && j0 == ref.j) return 1.0;

    if (method == MartinMethod::contour) {
        GreenEstimate num = green_value(k, u, i0, j0, i, j, contour);
        GreenEstimate den = green_value(k, u, ref.i, ref.j, i, j, contour);
        return checked_ratio(num.value, den.value, den.abs_error);
    }

    if (i > truncation.n || j > truncation.n)
        throw std::invalid_argument("martin_kernel: target outside the truncation box");
    OracleSolution num = green_truncated(k, i0, j0, truncation);
    OracleSolution den = green_truncated(k, ref.i, ref.j, truncation);
    return checked_ratio(num.at(i, j), den.at(i, j), den.err_at(i, j));
}

MartinDiagnostic martin_limit_diagnostic(const JumpKernel& k, const UniformizationData& u,
                                         double alpha, double beta, int i0, int j0,
                                         const MartinConfig& cfg) {
    MartinDiagnostic diag;
    diag.ref = cfg.ref;
    diag.directions = cfg.directions;
    diag.radii = cfg.radii;
    diag.limit_prediction =
        cubic_harmonic(alpha, beta, {i0, j0}) / cubic_harmonic(alpha, beta, cfg.ref);

    std::vector<LatticePoint> points;
    for (double slope : cfg.directions)
        for (int radius : cfg.radii) points.push_back(direction_point(slope, radius));

    std::vector<GreenEstimate> num, den;
    if (cfg.method == MartinMethod::contour) {
        num = green_grid(k, u, i0, j0, points, cfg.contour, cfg.threads);
        den = green_grid(k, u, cfg.ref.i, cfg.ref.j, points, cfg.contour, cfg.threads);
    } else {
        OracleSolution sn = green_truncated(k, i0, j0, cfg.truncation);
        OracleSolution sd = green_truncated(k, cfg.ref.i, cfg.ref.j, cfg.truncation);
        for (LatticePoint p : points) {
            if (p.i > cfg.truncation.n || p.j > cfg.truncation.n)
                throw std::invalid_argument(
                    "martin_limit_diagnostic: radius outside the truncation box");
            GreenEstimate gn, gd;
            gn.value = sn.at(p.i, p.j);
            gn.abs_error = sn.err_at(p.i, p.j);
            gd.value = sd.at(p.i, p.j);
            gd.abs_error = sd.err_at(p.i, p.j);
            num.push_back(gn);
            den.push_back(gd);
        }
    }

    diag.table.assign(cfg.directions.size(), std::vector<double>(cfg.radii.size(), 0.0));
    diag.max_rel_deviation.assign(cfg.radii.size(), 0.0);
    std::size_t cell = 0;
    for (std::size_t d = 0; d < cfg.directions.size(); ++d) {
        for (std::size_t r = 0; r < cfg.radii.size(); ++r, ++cell) {
            double kernel =
                checked_ratio(num[cell].value, den[cell].value, den[cell].abs_error);
            diag.table[d][r] = kernel;
            double dev = std::abs(kernel / diag.limit_prediction - 1.0);
            diag.max_rel_deviation[r] = std::max(diag.max_rel_deviation[r], dev);
        }
    }
    return diag;
}

}  // namespace qg
