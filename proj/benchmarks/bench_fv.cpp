#include <benchmark/benchmark.h>

#include <vector>

#include "hyplab/fv.hpp"
#include "hyplab/rng.hpp"

namespace {

using namespace hyplab;

void bm_fv_step(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const bool lf = state.range(1) != 0;
    const auto scheme = lf ? SchemeKind::lax_friedrichs() : SchemeKind::lagrangian_eulerian();
    UniformRng rng(1);
    std::vector<double> u(n);
    for (auto& v : u) v = rng.next(-1.0, 1.0);
    const double dx = 0.01;
    const double k = cfl_timestep(FluxKind::burgers(), u, dx, 0.2);
    for (auto _ : state) {
        auto next = step(scheme, FluxKind::burgers(), u, dx, k);
        benchmark::DoNotOptimize(next.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void bm_fv_solve_shock(benchmark::State& state) {
    const auto problem = catalog("burgers-shock");
    const double dx = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        FvConfig config{dx, 0.2, SchemeKind::lagrangian_eulerian(), {2.0}};
        auto solution = solve(problem, config);
        benchmark::DoNotOptimize(solution.values.data());
    }
}

}  // namespace

BENCHMARK(bm_fv_step)->Args({2000, 0})->Args({2000, 1})->Args({20000, 0});
BENCHMARK(bm_fv_solve_shock)->Arg(25)->Arg(100);
