#include <map>
#include <random>

#include <benchmark/benchmark.h>

#include "droplet/equilibrium.hpp"
#include "droplet/fekete.hpp"
#include "droplet/obstacle.hpp"
#include "droplet/sampler.hpp"
#include "droplet/scaling.hpp"

using namespace droplet;

namespace {

const WeightedBasis& cached_basis(int N) {
    static std::map<int, WeightedBasis> cache;
    auto it = cache.find(N);
    if (it == cache.end()) {
        Potential pot = Potential::gaussian();
        double beta = std::max(1, N - 1) / 1.0;
        it = cache
                 .emplace(N, build_basis(pot, beta, N,
                                         default_moment_grid(pot, beta, N)))
                 .first;
    }
    return it->second;
}

void BM_gram_and_basis(benchmark::State& state) {
    Potential pot = Potential::gaussian();
    int N = int(state.range(0));
    double beta = std::max(1, N - 1) / 1.0;
    BoxGrid g = default_moment_grid(pot, beta, N, 256);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_basis(pot, beta, N, g));
}
BENCHMARK(BM_gram_and_basis)->Arg(8)->Arg(16)->Arg(32);

void BM_kernel_eval(benchmark::State& state) {
    const WeightedBasis& b = cached_basis(int(state.range(0)));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto _ : state) {
        Complex z(u(rng), u(rng)), w(u(rng), u(rng));
        benchmark::DoNotOptimize(eval_kernel(b, z, w));
    }
}
BENCHMARK(BM_kernel_eval)->Arg(8)->Arg(32)->Arg(64);

void BM_correlation_density(benchmark::State& state) {
    const WeightedBasis& b = cached_basis(16);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int n = int(state.range(0));
    for (auto _ : state) {
        std::vector<Complex> zs;
        for (int i = 0; i < n; ++i)
            zs.push_back({u(rng), u(rng)});
        benchmark::DoNotOptimize(correlation_density(b, zs));
    }
}
BENCHMARK(BM_correlation_density)->Arg(1)->Arg(2)->Arg(4);

void BM_obstacle_solve(benchmark::State& state) {
    Potential pot = Potential::gaussian();
    BoxGrid g(4.0, int(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_obstacle(pot, 1.0, g));
}
BENCHMARK(BM_obstacle_solve)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_log_potential_field(benchmark::State& state) {
    Potential pot = Potential::gaussian();
    BoxGrid g(4.0, int(state.range(0)));
    DiscreteMeasure sigma =
        equilibrium_measure(pot, extract_droplet(pot, solve_obstacle(pot, 1.0, g)));
    for (auto _ : state)
        benchmark::DoNotOptimize(log_potential_field(sigma));
}
BENCHMARK(BM_log_potential_field)
    ->Arg(128)
    ->Arg(256)
    ->Unit(benchmark::kMillisecond);

void BM_mcmc_steps(benchmark::State& state) {
    Potential pot = Potential::gaussian();
    int N = int(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(mcmc_run(pot, N, 1.0, 20000, 3));
}
BENCHMARK(BM_mcmc_steps)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_fekete_energy_gradient(benchmark::State& state) {
    Potential pot = Potential::gaussian();
    int N = int(state.range(0));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Configuration zs;
    for (int i = 0; i < N; ++i)
        zs.push_back({u(rng), u(rng)});
    for (auto _ : state)
        benchmark::DoNotOptimize(energy_sharp_gradient(pot, zs, 0.5));
}
BENCHMARK(BM_fekete_energy_gradient)->Arg(8)->Arg(32);

} // namespace

BENCHMARK_MAIN();
