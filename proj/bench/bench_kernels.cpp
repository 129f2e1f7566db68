// Serial reference vs OpenMP version of the three hot kernels.
#include "ygraph/forcing.hpp"
#include "ygraph/fracops.hpp"
#include "ygraph/linops.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

using namespace ygraph;

namespace {

std::vector<double> smooth_trace(std::size_t n, double dt)
{
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = dt * double(i);
        f[i] = t * t * std::exp(-t);
    }
    return f;
}

template <bool Parallel>
void BM_rl_positive(benchmark::State& st)
{
    const auto n = std::size_t(st.range(0));
    const auto f = smooth_trace(n, 1e-3);
    std::vector<double> out(n);
    for (auto _ : st) {
        if constexpr (Parallel)
            kernels::rl_positive<double>(f, 1e-3, 0.5, out);
        else
            kernels::rl_positive_serial<double>(f, 1e-3, 0.5, out);
        benchmark::DoNotOptimize(out.data());
    }
}

struct DuhamelData {
    std::vector<std::vector<cplx>> W;
    std::vector<double> c, xi;

    DuhamelData(std::size_t levels, std::size_t modes) : W(levels, std::vector<cplx>(modes)), c(levels, 1.0), xi(modes)
    {
        for (std::size_t k = 0; k < modes; ++k) xi[k] = -8.0 + 16.0 * double(k) / double(modes);
        for (std::size_t j = 0; j < levels; ++j)
            for (std::size_t k = 0; k < modes; ++k) W[j][k] = std::exp(-xi[k] * xi[k]) * double(j + 1);
    }
};

template <bool Parallel>
void BM_duhamel_accumulate(benchmark::State& st)
{
    const DuhamelData d(std::size_t(st.range(0)), 1024);
    const double dt = 1e-3, t = dt * double(st.range(0) - 1);
    std::vector<cplx> S;
    for (auto _ : st) {
        if constexpr (Parallel)
            kernels::duhamel_accumulate(d.W, d.c, d.xi, dt, t, S);
        else
            kernels::duhamel_accumulate_serial(d.W, d.c, d.xi, dt, t, S);
        benchmark::DoNotOptimize(S.data());
    }
}

template <bool Parallel>
void BM_phi_level(benchmark::State& st)
{
    CTimeTrace q{0.005, {}, true};
    for (double v : smooth_trace(201, 0.005)) q.samples.emplace_back(v, 0.0);
    const ForcingKernel k(q);
    const GridLayout grid{-5.0, 10.0 / double(st.range(0) - 1), std::size_t(st.range(0))};
    std::vector<cplx> out(grid.n);
    for (auto _ : st) {
        if constexpr (Parallel)
            kernels::phi_level(k, 0, grid, 1.0, out);
        else
            kernels::phi_level_serial(k, 0, grid, 1.0, out);
        benchmark::DoNotOptimize(out.data());
    }
}

} // namespace

BENCHMARK(BM_rl_positive<false>)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rl_positive<true>)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_duhamel_accumulate<false>)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_duhamel_accumulate<true>)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_phi_level<false>)->Arg(101)->Arg(401)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_phi_level<true>)->Arg(101)->Arg(401)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
