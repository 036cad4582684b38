#include <benchmark/benchmark.h>

#include <random>

#include "orbitbound/criteria.hpp"
#include "orbitbound/verify.hpp"

using namespace orbitbound;

namespace {

SystemSpec hardening_duffing() {
    return scalar_system(1.0, 0.1, 1.1, PotentialEnvelope::hardening(1.0, 4.0, 1.0));
}

TrigForcing three_harmonics() {
    return TrigForcing(2.0 * 3.141592653589793, {0.1},
                       {Harmonic{1, {0.0}, {1.0}}, Harmonic{2, {0.3}, {0.0}},
                        Harmonic{5, {0.1}, {-0.2}}});
}

void BM_LpNormQuadrature(benchmark::State& state) {
    const TrigForcing f = three_harmonics();
    const double p = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lp_norm(f, p));
}
BENCHMARK(BM_LpNormQuadrature)->Arg(1)->Arg(4);

void BM_SupNorm(benchmark::State& state) {
    const TrigForcing f = three_harmonics();
    for (auto _ : state) benchmark::DoNotOptimize(lp_norm(f, infinite_p));
}
BENCHMARK(BM_SupNorm);

void BM_ParsevalL2(benchmark::State& state) {
    const TrigForcing f = three_harmonics();
    for (auto _ : state) benchmark::DoNotOptimize(l2_norm_coefficients(f));
}
BENCHMARK(BM_ParsevalL2);

void BM_JacobiEigen(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) a(i, j) = a(j, i) = dist(rng);
    for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigen(a));
}
BENCHMARK(BM_JacobiEigen)->Arg(4)->Arg(8)->Arg(16);

void BM_PositiveRoot(benchmark::State& state) {
    const SofteningPoly poly{1.0, 1.0, 1.0, 5.0};
    for (auto _ : state) benchmark::DoNotOptimize(positive_root(poly));
}
BENCHMARK(BM_PositiveRoot);

void BM_CriticalAmplitude(benchmark::State& state) {
    const SystemSpec spec = hardening_duffing();
    const TrigForcing f = TrigForcing::scalar_sine(1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(critical_amplitude(spec, f));
}
BENCHMARK(BM_CriticalAmplitude);

void BM_IntegrateOnePeriod(benchmark::State& state) {
    const SystemSpec spec = hardening_duffing();
    const ConcretePotentialGradient grad =
        ConcretePotentialGradient::cubic(PotentialKind::Hardening, 1.0, 1);
    const TrigForcing f = TrigForcing::scalar_sine(0.5, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            integrate(spec, grad, f, {0.0, 0.0}, 0.0, f.period(), 0.0));
}
BENCHMARK(BM_IntegrateOnePeriod);

void BM_FindLimitCycle(benchmark::State& state) {
    const SystemSpec spec = hardening_duffing();
    const ConcretePotentialGradient grad =
        ConcretePotentialGradient::cubic(PotentialKind::Hardening, 1.0, 1);
    const TrigForcing f = TrigForcing::scalar_sine(0.5, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(find_limit_cycle(spec, grad, f, 1));
}
BENCHMARK(BM_FindLimitCycle);

}  // namespace

BENCHMARK_MAIN();
