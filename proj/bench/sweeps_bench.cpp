// OpenMP sweeps against their serial references.

#include "bilap/aviles_bvp.hpp"
#include "bilap/delaunay.hpp"
#include "bilap/sweeps.hpp"

#include <benchmark/benchmark.h>

using namespace bilap;

namespace {

void sign_chart_par(benchmark::State& st)
{
    for (auto _ : st) benchmark::DoNotOptimize(sign_chart(5, 16, 64, build_sigma()));
}

void sign_chart_ser(benchmark::State& st)
{
    for (auto _ : st) benchmark::DoNotOptimize(sign_chart_serial(5, 16, 64, build_sigma()));
}

std::vector<Params> grid_points()
{
    std::vector<Params> pts;
    for (int n = 5; n <= 16; ++n)
        for (const auto& s : interior_s_grid(n, 64)) pts.emplace_back(n, s);
    return pts;
}

void coefficient_grid_par(benchmark::State& st)
{
    const auto pts = grid_points();
    for (auto _ : st) benchmark::DoNotOptimize(coefficient_grid(pts, build_sigma()));
}

void coefficient_grid_ser(benchmark::State& st)
{
    const auto pts = grid_points();
    for (auto _ : st) benchmark::DoNotOptimize(coefficient_grid_serial(pts, build_sigma()));
}

void trials_par(benchmark::State& st)
{
    for (auto _ : st) benchmark::DoNotOptimize(monotonicity_trials(Params(5, 7), build_sigma(), 20, 42, 2.0, {}));
}

void trials_ser(benchmark::State& st)
{
    for (auto _ : st)
        benchmark::DoNotOptimize(monotonicity_trials_serial(Params(5, 7), build_sigma(), 20, 42, 2.0, {}));
}

std::vector<double> a_grid()
{
    const double a0 = critical_constants(5).a0;
    return {0.2 * a0, 0.4 * a0, 0.6 * a0, 0.8 * a0, 0.9 * a0, 0.95 * a0};
}

void orbits_par(benchmark::State& st)
{
    const auto grid = a_grid();
    for (auto _ : st) benchmark::DoNotOptimize(orbit_table(5, grid));
}

void orbits_ser(benchmark::State& st)
{
    const auto grid = a_grid();
    for (auto _ : st) benchmark::DoNotOptimize(orbit_table_serial(5, grid));
}

void bvp(benchmark::State& st)
{
    AvilesBvpOptions opts;
    opts.t1 = 600;
    opts.parallel = st.range(0) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(solve_aviles_bvp(6, opts));
}

}  // namespace

BENCHMARK(sign_chart_par)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(sign_chart_ser)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(coefficient_grid_par)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(coefficient_grid_ser)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(trials_par)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(trials_ser)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(orbits_par)->Unit(benchmark::kMillisecond)->UseRealTime()->Iterations(1);
BENCHMARK(orbits_ser)->Unit(benchmark::kMillisecond)->UseRealTime()->Iterations(1);
BENCHMARK(bvp)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime()->Iterations(2);

BENCHMARK_MAIN();
