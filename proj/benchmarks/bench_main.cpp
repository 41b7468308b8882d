#include <benchmark/benchmark.h>

#include <complex>

#include "qg/green_integral.hpp"
#include "qg/oracle.hpp"
#include "qg/uniformization.hpp"
#include "qg/walk_model.hpp"

namespace {

using namespace qg;
using cplx = std::complex<double>;

JumpKernel su3() {
    JumpKernel k{};
    k.at(1, 0) = k.at(-1, 1) = k.at(0, -1) = 1.0 / 3.0;
    return k;
}

JumpKernel family_kernel() {
    return kernel_from_cubic_family({1.3, 0.2, 0.05, 0.22});
}

void BM_uniformize(benchmark::State& state) {
    JumpKernel k = family_kernel();
    for (auto _ : state) benchmark::DoNotOptimize(uniformize(k));
}
BENCHMARK(BM_uniformize);

void BM_orbit_sum(benchmark::State& state) {
    UniformizationData u = uniformize(family_kernel());
    cplx z = std::polar(0.1, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(orbit_sum(u, 2, 3, z));
}
BENCHMARK(BM_orbit_sum);

void BM_green_integrand(benchmark::State& state) {
    JumpKernel k = family_kernel();
    UniformizationData u = uniformize(k);
    cplx z = std::polar(1.0, 5.0 * M_PI / 6.0);
    for (auto _ : state) benchmark::DoNotOptimize(green_integrand(k, u, 1, 1, 6, 4, z));
}
BENCHMARK(BM_green_integrand);

void BM_green_value(benchmark::State& state) {
    JumpKernel k = su3();
    UniformizationData u = uniformize(k);
    int i = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(green_value(k, u, 1, 1, i, i));
}
BENCHMARK(BM_green_value)->Arg(3)->Arg(10)->Arg(30);

void BM_oracle_solve(benchmark::State& state) {
    JumpKernel k = su3();
    TruncationConfig cfg;
    cfg.n = int(state.range(0));
    cfg.extrapolate = false;
    cfg.use_cache = false;
    for (auto _ : state) benchmark::DoNotOptimize(green_truncated(k, 1, 1, cfg));
}
BENCHMARK(BM_oracle_solve)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
