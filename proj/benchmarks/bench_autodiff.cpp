#include <benchmark/benchmark.h>

#include "hyplab/mlp.hpp"
#include "hyplab/pinn.hpp"
#include "hyplab/tape.hpp"

namespace {

using namespace hyplab;

void bm_dual_propagate(benchmark::State& state) {
    const MlpParams params = init_params(static_cast<std::size_t>(state.range(0)), 3);
    double x = -2.0;
    for (auto _ : state) {
        const DualValue u = dual_propagate(params, x, 1.0);
        benchmark::DoNotOptimize(u.value);
        x += 1e-6;
    }
}

void bm_tape_loss_grad(benchmark::State& state) {
    const auto problem = catalog("burgers-shock");
    const MlpParams params = init_params(4, 3);
    const CollocationSet points =
        sample_collocation(problem, static_cast<std::size_t>(state.range(0)), 16, 9);
    for (auto _ : state) {
        Tape tape;
        const auto rec = record_loss_on_tape(tape, params, problem.flux, 0.01, points);
        tape.backward(rec.loss);
        benchmark::DoNotOptimize(tape.grad(rec.params[0]));
    }
}

}  // namespace

BENCHMARK(bm_dual_propagate)->Arg(20)->Arg(40)->Arg(60);
BENCHMARK(bm_tape_loss_grad)->Arg(16)->Arg(64);
