#include "qg/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qg/errors.hpp"

namespace qg {

namespace detail {
std::vector<double> solve_truncated_field(const JumpKernel& k, int i0, int j0, int n,
                                          double tol, int max_cycles, double* residual_out,
                                          long* cycles_out);
}

namespace {

constexpr std::uint32_t kCacheMagic = 0x47514f31;  // "1OQG"

std::string cache_path(const std::string& dir, const JumpKernel& k, int i0, int j0, int n) {
    char name[64];
    std::snprintf(name, sizeof(name), "%016llx_%d_%d_%d.grid",
                  static_cast<unsigned long long>(kernel_hash(k)), i0, j0, n);
    return dir + "/" + name;
}

bool load_cached_field(const std::string& path, int n, std::vector<double>& field) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::uint32_t magic = 0;
    std::uint32_t stored_n = 0;
    in.read(reinterpret_cast<char*>(&magic), sizeof magic);
    in.read(reinterpret_cast<char*>(&stored_n), sizeof stored_n);
    if (!in || magic != kCacheMagic || stored_n != static_cast<std::uint32_t>(n)) return false;
    field.resize(std::size_t(n) * n);
    in.read(reinterpret_cast<char*>(field.data()),
            static_cast<std::streamsize>(field.size() * sizeof(double)));
    return bool(in);
}

void store_cached_field(const std::string& path, int n, const std::vector<double>& field) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return;
        std::uint32_t magic = kCacheMagic;
        auto stored_n = static_cast<std::uint32_t>(n);
        out.write(reinterpret_cast<const char*>(&magic), sizeof magic);
        out.write(reinterpret_cast<const char*>(&stored_n), sizeof stored_n);
        out.write(reinterpret_cast<const char*>(field.data()),
                  static_cast<std::streamsize>(field.size() * sizeof(double)));
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            return;
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
}

std::vector<double> solve_with_cache(const JumpKernel& k, int i0, int j0, int n,
                                     const TruncationConfig& cfg, double* residual,
                                     long* cycles) {
    std::optional<std::string> dir = cfg.use_cache ? oracle_cache_dir() : std::nullopt;
    if (dir) {
        std::vector<double> field;
        if (load_cached_field(cache_path(*dir, k, i0, j0, n), n, field)) {
            if (residual) *residual = 0.0;
            if (cycles) *cycles = 0;
            return field;
        }
    }
    std::vector<double> field =
        detail::solve_truncated_field(k, i0, j0, n, cfg.solver_tol, cfg.max_cycles,
                                      residual, cycles);
    if (dir) {
        std::error_code ec;
        std::filesystem::create_directories(*dir, ec);
        store_cached_field(cache_path(*dir, k, i0, j0, n), n, field);
    }
    return field;
}

}  // namespace

std::uint64_t kernel_hash(const JumpKernel& k) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a offset basis
    auto mix = [&h](const void* data, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t m = 0; m < len; ++m) {
            h ^= bytes[m];
            h *= 1099511628211ull;
        }
    };
    for (auto [di, dj] : kJumps) {
        double v = k.at(di, dj);
        mix(&v, sizeof v);
    }
    return h;
}

std::optional<std::string> oracle_cache_dir() {
    const char* env = std::getenv("QG_ORACLE_CACHE_DIR");
    if (!env || !*env) return std::nullopt;
    return std::string(env);
}

OracleSolution green_truncated(const JumpKernel& k, int i0, int j0, const TruncationConfig& cfg) {
    OracleSolution sol;
    sol.n = cfg.n;
    sol.start = {i0, j0};
    sol.extrapolated = cfg.extrapolate;

    double res_n = 0;
    long cyc_n = 0;
    std::vector<double> fine = solve_with_cache(k, i0, j0, cfg.n, cfg, &res_n, &cyc_n);
    sol.solver_residual = res_n;
    sol.cycles = cyc_n;

    if (!cfg.extrapolate) {
        sol.value = std::move(fine);
        sol.abs_err.assign(sol.value.size(), 0.0);
        return sol;
    }

    double res_2n = 0;
    long cyc_2n = 0;
    std::vector<double> wide = solve_with_cache(k, i0, j0, 2 * cfg.n, cfg, &res_2n, &cyc_2n);
    sol.solver_residual = std::max(res_n, res_2n);
    sol.cycles += cyc_2n;

    const int n = cfg.n;
    sol.value.resize(std::size_t(n) * n);
    sol.abs_err.resize(std::size_t(n) * n);
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) {
            double gn = fine[std::size_t(j - 1) * n + (i - 1)];
            double g2n = wide[std::size_t(j - 1) * (2 * n) + (i - 1)];
            // Enlarging the box only adds paths, so the doubled solve
            // dominates entrywise up to solver noise (residual tolerance
            // times a condition number ~ (n/pi)^2); fail loudly beyond that.
            if (g2n < gn - 1e-7 * (1.0 + std::fabs(gn))) {
                std::ostringstream os;
                os << "oracle: G_2n < G_n at (" << i << "," << j << "): " << g2n << " < " << gn;
                throw nonconvergence_error(os.str());
            }
            sol.value[std::size_t(j - 1) * n + (i - 1)] = g2n;
            sol.abs_err[std::size_t(j - 1) * n + (i - 1)] =
                std::max(std::fabs(g2n - gn), 1e-15);
        }
    }
    return sol;
}

AbsorptionData absorption_truncated(const JumpKernel& k, const OracleSolution& sol) {
    const int n = sol.n;
    auto g = [&sol, n](int i, int j) -> double {
        if (i < 1 || i > n || j < 1 || j > n) return 0.0;
        return sol.at(i, j);
    };

    AbsorptionData ab;
    ab.h.resize(n);
    ab.h_tilde.resize(n);
    for (int i = 1; i <= n; ++i)
        ab.h[i - 1] = k.at(1, -1) * g(i - 1, 1) + k.at(0, -1) * g(i, 1) + k.at(-1, -1) * g(i + 1, 1);
    for (int j = 1; j <= n; ++j)
        ab.h_tilde[j - 1] =
            k.at(-1, 1) * g(1, j - 1) + k.at(-1, 0) * g(1, j) + k.at(-1, -1) * g(1, j + 1);
    ab.h00 = k.at(-1, -1) * g(1, 1);

    double mass = ab.h00;
    for (double v : ab.h) mass += v;
    for (double v : ab.h_tilde) mass += v;
    ab.mass_defect = 1.0 - mass;
    return ab;
}

SimulationResult simulate(const JumpKernel& k, int i0, int j0, const SimulationConfig& cfg) {
    if (i0 < 1 || j0 < 1) throw std::invalid_argument("simulate: start must be interior");

    // Cumulative jump table in the fixed kJumps order.
    double cdf[8];
    double acc = 0;
    for (int m = 0; m < 8; ++m) {
        auto [di, dj] = kJumps[m];
        acc += k.at(di, dj);
        cdf[m] = acc;
    }

    SimulationResult out;
    out.paths = cfg.paths;
    std::vector<double> sum(cfg.targets.size(), 0.0), sumsq(cfg.targets.size(), 0.0);
    std::map<int, long> absorb_h, absorb_ht;
    long absorb_00 = 0, absorbed = 0;

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<long> visit(cfg.targets.size());

    for (long path = 0; path < cfg.paths; ++path) {
        std::fill(visit.begin(), visit.end(), 0);
        long i = i0, j = j0;
        for (long step = 0; step <= cfg.step_cap; ++step) {
            for (std::size_t t = 0; t < cfg.targets.size(); ++t)
                if (i == cfg.targets[t].i && j == cfg.targets[t].j) ++visit[t];
            double r = unif(rng);
            int m = 0;
            while (m < 7 && r > cdf[m]) ++m;
            i += kJumps[m].first;
            j += kJumps[m].second;
            if (i == 0 || j == 0) {
                ++absorbed;
                if (i == 0 && j == 0) ++absorb_00;
                else if (j == 0) ++absorb_h[static_cast<int>(i)];
                else ++absorb_ht[static_cast<int>(j)];
                break;
            }
        }
        for (std::size_t t = 0; t < cfg.targets.size(); ++t) {
            sum[t] += double(visit[t]);
            sumsq[t] += double(visit[t]) * double(visit[t]);
        }
    }

    const double np = double(cfg.paths);
    for (std::size_t t = 0; t < cfg.targets.size(); ++t) {
        SimulationResult::Visits v;
        v.target = cfg.targets[t];
        v.mean = sum[t] / np;
        double var = std::max(0.0, sumsq[t] / np - v.mean * v.mean);
        v.std_error = std::sqrt(var / np);
        out.visits.push_back(v);
    }
    for (auto [site, count] : absorb_h) out.h[site] = double(count) / np;
    for (auto [site, count] : absorb_ht) out.h_tilde[site] = double(count) / np;
    out.h00 = double(absorb_00) / np;
    out.absorbed_fraction = double(absorbed) / np;
    return out;
}

std::complex<double> functional_equation_residual(const JumpKernel& k, const OracleSolution& sol,
                                                  const AbsorptionData& ab,
                                                  std::complex<double> x,
                                                  std::complex<double> y) {
    if (std::abs(x) >= 1.0 || std::abs(y) >= 1.0)
        throw std::invalid_argument("functional_equation_residual: need |x| < 1 and |y| < 1");

    using cd = std::complex<double>;
    const int n = sol.n;

    // G(x, y) = sum G_ij x^{i-1} y^{j-1}, Horner in both variables.
    cd gxy = 0;
    for (int j = n; j >= 1; --j) {
        cd row = 0;
        for (int i = n; i >= 1; --i) row = row * x + sol.at(i, j);
        gxy = gxy * y + row;
    }

    cd hx = 0, hty = 0;
    for (int i = n; i >= 1; --i) hx = (hx + ab.h[i - 1]) * x;
    for (int j = n; j >= 1; --j) hty = (hty + ab.h_tilde[j - 1]) * y;

    cd qxy = 0;  // Q(x, y) via the polynomial form
    for (int ei = 2; ei >= 0; --ei) {
        cd row = 0;
        for (int ej = 2; ej >= 0; --ej) row = row * y + k.at(ei - 1, ej - 1);
        qxy = qxy * x + row;
    }
    qxy -= x * y;

    cd start_term = 1;
    for (int m = 0; m < sol.start.i; ++m) start_term *= x;
    for (int m = 0; m < sol.start.j; ++m) start_term *= y;

    return qxy * gxy - (hx + hty + ab.h00 - start_term);
}

}  // namespace qg
