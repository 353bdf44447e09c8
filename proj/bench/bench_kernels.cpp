// Serial reference against the OpenMP kernels on n x n stencils.

#include "moserlab/kernels.hpp"
#include "moserlab/pde_lab.hpp"
#include "moserlab/spaces_grid.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace moserlab;

namespace {

struct Fixture {
    explicit Fixture(int n) : g(grid::Domain{}, n, 1) {
        S = pde::stiffness(g, grid::WeightField::identity(g));
        for (double& d : S.diag) d += 1.0;
        std::mt19937_64 rng(n);
        std::uniform_real_distribution<double> u(0.1, 1.0);
        x.resize(g.cells());
        w.assign(g.cells(), g.h() * g.h());
        for (double& v : x) v = u(rng);
        y.assign(g.cells(), 0.0);
    }
    grid::Grid g;
    kernels::Stencil S;
    std::vector<double> x, y, w;
};

template <bool Parallel>
void BM_apply(benchmark::State& st) {
    Fixture f(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        if constexpr (Parallel) kernels::omp::apply(f.S, f.x, f.y);
        else kernels::serial::apply(f.S, f.x, f.y);
        benchmark::DoNotOptimize(f.y.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.x.size()));
}

template <bool Parallel>
void BM_dot(benchmark::State& st) {
    Fixture f(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(Parallel ? kernels::omp::dot(f.x, f.x) : kernels::serial::dot(f.x, f.x));
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.x.size()));
}

template <bool Parallel>
void BM_pow_sum(benchmark::State& st) {
    Fixture f(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(Parallel ? kernels::omp::weighted_pow_sum(f.x, f.w, 7.3, 1.0)
                                          : kernels::serial::weighted_pow_sum(f.x, f.w, 7.3, 1.0));
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.x.size()));
}

template <bool Parallel>
void BM_pcg(benchmark::State& st) {
    Fixture f(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        std::vector<double> sol(f.x.size(), 0.0);
        const auto r = kernels::pcg(f.S, f.x, sol, 1e-10, 100000, Parallel);
        benchmark::DoNotOptimize(r.iterations);
    }
}

}  // namespace

BENCHMARK(BM_apply<false>)->Name("apply/serial")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_apply<true>)->Name("apply/omp")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_dot<false>)->Name("dot/serial")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_dot<true>)->Name("dot/omp")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_pow_sum<false>)->Name("pow_sum/serial")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_pow_sum<true>)->Name("pow_sum/omp")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_pcg<false>)->Name("pcg/serial")->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pcg<true>)->Name("pcg/omp")->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
