#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <sstream>
#include <vector>

#include "qg/errors.hpp"
#include "qg/oracle.hpp"

// Matrix-free geometric multigrid for the killed-walk balance equations
//   u(z) - sum_d p(-d) u(z + d) = f(z)   on [1,n]^2, u = 0 outside.
// The operator is an M-matrix diffusion stencil (diagonal 1, row sums >= 0),
// smoothed with lexicographic Gauss-Seidel.  Grids coarsen by 2 while even;
// the restricted residual is summed over each 2x2 block, which carries the
// h^2 rescaling of the rediscretised stencil.  The coarsest level is solved
// directly with a banded LU (no pivoting: safe for M-matrices).

namespace qg::detail {

namespace {

struct Level {
    int n;
    std::vector<double> u, f, r;  // (n+2)^2 with a zero halo

    explicit Level(int n_) : n(n_) {
        std::size_t sz = std::size_t(n + 2) * (n + 2);
        u.assign(sz, 0.0);
        f.assign(sz, 0.0);
        r.assign(sz, 0.0);
    }
    std::size_t idx(int i, int j) const { return std::size_t(j) * (n + 2) + i; }
};

// Direct solve of the coarsest grid via banded LU in lexicographic order.
class BandedSolver {
public:
    BandedSolver(int n, const double w[3][3]) : n_(n), m_(n * n), band_(n + 1) {
        const std::size_t cols = 2 * std::size_t(band_) + 1;
        a_.assign(std::size_t(m_) * cols, 0.0);
        for (int j = 1; j <= n_; ++j) {
            for (int i = 1; i <= n_; ++i) {
                const int row = (j - 1) * n_ + (i - 1);
                at(row, row) = 1.0;
                for (int b = -1; b <= 1; ++b) {
                    for (int a = -1; a <= 1; ++a) {
                        if (a == 0 && b == 0) continue;
                        int ii = i + a, jj = j + b;
                        if (ii < 1 || ii > n_ || jj < 1 || jj > n_) continue;
                        at(row, row + b * n_ + a) = -w[a + 1][b + 1];
                    }
                }
            }
        }
        factorize();
    }

    void solve(const Level& lvl, std::vector<double>& x) const {
        x.assign(m_, 0.0);
        for (int j = 1; j <= n_; ++j)
            for (int i = 1; i <= n_; ++i) x[(j - 1) * n_ + (i - 1)] = lvl.f[lvl.idx(i, j)];
        // forward substitution with unit diagonal L
        for (int r = 0; r < m_; ++r) {
            double xr = x[r];
            if (xr == 0.0) continue;
            const int hi = std::min(r + band_, m_ - 1);
            for (int r2 = r + 1; r2 <= hi; ++r2) x[r2] -= cat(r2, r) * xr;
        }
        // back substitution
        for (int r = m_ - 1; r >= 0; --r) {
            double acc = x[r];
            const int hi = std::min(r + band_, m_ - 1);
            for (int c = r + 1; c <= hi; ++c) acc -= cat(r, c) * x[c];
            x[r] = acc / cat(r, r);
        }
    }

private:
    double& at(int row, int col) { return a_[std::size_t(row) * (2 * band_ + 1) + (col - row + band_)]; }
    double cat(int row, int col) const {
        return a_[std::size_t(row) * (2 * band_ + 1) + (col - row + band_)];
    }

    void factorize() {
        for (int r = 0; r < m_; ++r) {
            const double piv = cat(r, r);
            const int hi = std::min(r + band_, m_ - 1);
            for (int r2 = r + 1; r2 <= hi; ++r2) {
                double l = cat(r2, r) / piv;
                at(r2, r) = l;  // store L in place
                if (l == 0.0) continue;
                const int chi = std::min(r + band_, m_ - 1);
                for (int c = r + 1; c <= chi; ++c) at(r2, c) -= l * cat(r, c);
            }
        }
    }

    int n_, m_, band_;
    std::vector<double> a_;
};

class MultigridSolver {
public:
    MultigridSolver(const JumpKernel& k, int n) {
        for (int b = -1; b <= 1; ++b)
            for (int a = -1; a <= 1; ++a) w_[a + 1][b + 1] = (a || b) ? k.at(-a, -b) : 0.0;
        int m = n;
        levels_.emplace_back(m);
        while (m % 2 == 0 && m > 96) {
            m /= 2;
            levels_.emplace_back(m);
        }
        coarse_ = std::make_unique<BandedSolver>(levels_.back().n, w_);
    }

    // u <- u + smoothing/correction toward A u = f on the finest level.
    void vcycle() { descend(0); }

    double apply_residual(int l) {
        Level& L = levels_[l];
        double worst = 0;
        for (int j = 1; j <= L.n; ++j) {
            for (int i = 1; i <= L.n; ++i) {
                double acc = L.f[L.idx(i, j)] - L.u[L.idx(i, j)];
                acc += stencil_sum(L, i, j);
                L.r[L.idx(i, j)] = acc;
                worst = std::max(worst, std::fabs(acc));
            }
        }
        return worst;
    }

    Level& finest() { return levels_.front(); }

private:
    double stencil_sum(const Level& L, int i, int j) const {
        const std::size_t c = L.idx(i, j);
        const std::size_t s = L.n + 2;
        const double* u = L.u.data();
        return w_[0][0] * u[c - s - 1] + w_[1][0] * u[c - s] + w_[2][0] * u[c - s + 1]
             + w_[0][1] * u[c - 1] + w_[2][1] * u[c + 1]
             + w_[0][2] * u[c + s - 1] + w_[1][2] * u[c + s] + w_[2][2] * u[c + s + 1];
    }

    void smooth(Level& L) {
        for (int j = 1; j <= L.n; ++j)
            for (int i = 1; i <= L.n; ++i)
                L.u[L.idx(i, j)] = L.f[L.idx(i, j)] + stencil_sum(L, i, j);
    }

    void descend(std::size_t l) {
        Level& L = levels_[l];
        if (l + 1 == levels_.size()) {
            std::vector<double> x;
            coarse_->solve(L, x);
            for (int j = 1; j <= L.n; ++j)
                for (int i = 1; i <= L.n; ++i) L.u[L.idx(i, j)] = x[(j - 1) * L.n + (i - 1)];
            return;
        }
        smooth(L);
        smooth(L);
        apply_residual(l);

        Level& C = levels_[l + 1];
        std::fill(C.u.begin(), C.u.end(), 0.0);
        for (int J = 1; J <= C.n; ++J) {
            for (int I = 1; I <= C.n; ++I) {
                // Sum over the 2x2 block: full-weighting average times the
                // h^2 = 4 factor of the coarse rediscretisation.
                C.f[C.idx(I, J)] = L.r[L.idx(2 * I - 1, 2 * J - 1)] + L.r[L.idx(2 * I, 2 * J - 1)]
                                 + L.r[L.idx(2 * I - 1, 2 * J)] + L.r[L.idx(2 * I, 2 * J)];
            }
        }
        descend(l + 1);

        // Bilinear cell-centered prolongation; the zero halo supplies the
        // homogeneous Dirichlet ghost values.
        for (int j = 1; j <= L.n; ++j) {
            const int J = (j + 1) / 2;
            const int Jn = (j % 2 == 1) ? J - 1 : J + 1;
            const double wj = 0.75, wjn = 0.25;
            for (int i = 1; i <= L.n; ++i) {
                const int I = (i + 1) / 2;
                const int In = (i % 2 == 1) ? I - 1 : I + 1;
                double corr = wj * (0.75 * C.u[C.idx(I, J)] + 0.25 * C.u[C.idx(In, J)])
                            + wjn * (0.75 * C.u[C.idx(I, Jn)] + 0.25 * C.u[C.idx(In, Jn)]);
                L.u[L.idx(i, j)] += corr;
            }
        }
        smooth(L);
        smooth(L);
    }

    double w_[3][3];
    std::vector<Level> levels_;
    std::unique_ptr<BandedSolver> coarse_;
};

}  // namespace

// Solve the truncated system; returns the interior field without halo,
// row-major (j-1)*n + (i-1).
std::vector<double> solve_truncated_field(const JumpKernel& k, int i0, int j0, int n,
                                          double tol, int max_cycles, double* residual_out,
                                          long* cycles_out) {
    if (i0 < 1 || i0 > n || j0 < 1 || j0 > n)
        throw std::invalid_argument("oracle: start point outside the truncation box");

    MultigridSolver mg(k, n);
    Level& top = mg.finest();
    top.f[top.idx(i0, j0)] = 1.0;

    double prev = std::numeric_limits<double>::infinity();
    double res = mg.apply_residual(0);
    long cycles = 0;
    while (res > tol) {
        if (cycles >= max_cycles) {
            std::ostringstream os;
            os << "oracle solver: residual " << res << " after " << cycles
               << " V-cycles (n = " << n << ", tol = " << tol << ")";
            throw nonconvergence_error(os.str());
        }
        mg.vcycle();
        ++cycles;
        res = mg.apply_residual(0);
        if (res > prev * (1.0 + 1e-6)) {
            std::ostringstream os;
            os << "oracle solver: residual increased from " << prev << " to " << res
               << " at cycle " << cycles << " (n = " << n << ")";
            throw nonconvergence_error(os.str());
        }
        prev = res;
    }

    if (residual_out) *residual_out = res;
    if (cycles_out) *cycles_out = cycles;

    std::vector<double> field(std::size_t(n) * n);
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) field[std::size_t(j - 1) * n + (i - 1)] = top.u[top.idx(i, j)];
    return field;
}

}  // namespace qg::detail
