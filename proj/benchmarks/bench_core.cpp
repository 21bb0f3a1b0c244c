// Microbenchmarks for the hot paths: basis construction at fixed precision,
// zero polishing, kernel assembly, the equilibrium solve, and sampling.

#include "dopkit/ensembles.hpp"
#include "dopkit/equilibrium.hpp"
#include "dopkit/harness.hpp"
#include "dopkit/kernels.hpp"
#include "dopkit/orthopoly.hpp"
#include "dopkit/tiling.hpp"

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

namespace {

using namespace dopkit;

LogWeights bench_weights(int N, double p) {
    auto ns = std::make_shared<const NodeSet>(build_nodes(NodeDensity::uniform(0.0, 1.0), N));
    return log_weight(WeightSpec::krawtchouk(p), ns);
}

const OrthoBasis& cached_basis() {
    static OrthoBasis b = build_basis(bench_weights(100, 0.8), 50, 256);
    return b;
}

void BM_build_basis_256(benchmark::State& state) {
    LogWeights lw = bench_weights(static_cast<int>(state.range(0)), 0.8);
    const int kmax = static_cast<int>(state.range(0)) / 2;
    for (auto _ : state) {
        OrthoBasis b = build_basis(lw, kmax, 256);
        benchmark::DoNotOptimize(b.Q);
    }
}
BENCHMARK(BM_build_basis_256)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_zeros(benchmark::State& state) {
    const OrthoBasis& b = cached_basis();
    for (auto _ : state) {
        ZeroSet zs = zeros(b, 50);
        benchmark::DoNotOptimize(zs.zeros);
    }
}
BENCHMARK(BM_zeros)->Unit(benchmark::kMillisecond);

void BM_kernel_assembly(benchmark::State& state) {
    const OrthoBasis& b = cached_basis();
    for (auto _ : state) {
        KernelMatrix km = cd_kernel(b, 50);
        benchmark::DoNotOptimize(km.K);
    }
}
BENCHMARK(BM_kernel_assembly)->Unit(benchmark::kMillisecond);

void BM_equilibrium_solve(benchmark::State& state) {
    FieldPhi phi = field(weight_potential(WeightSpec::krawtchouk(0.8)),
                         NodeDensity::uniform(0.0, 1.0));
    const int M = static_cast<int>(state.range(0));
    for (auto _ : state) {
        EquilibriumMeasure eqm = solve(phi, 0.5, M);
        benchmark::DoNotOptimize(eqm.mass);
    }
}
BENCHMARK(BM_equilibrium_solve)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_sample(benchmark::State& state) {
    static KernelMatrix km = cd_kernel(cached_basis(), 50);
    std::mt19937_64 rng(1);
    for (auto _ : state) {
        Configuration cfg = sample(km, rng);
        benchmark::DoNotOptimize(cfg.indices);
    }
}
BENCHMARK(BM_sample)->Unit(benchmark::kMillisecond);

void BM_column_profile(benchmark::State& state) {
    ColumnEnsemble col = column_ensemble({20, 20, 20}, 20);
    for (auto _ : state) {
        std::vector<double> prof = one_point_profile(col);
        benchmark::DoNotOptimize(prof);
    }
}
BENCHMARK(BM_column_profile)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
