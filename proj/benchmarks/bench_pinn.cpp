#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "hyplab/pinn.hpp"

namespace {

using namespace hyplab;

// One full-batch loss+gradient evaluation, the unit of work of a training
// iteration.
void bm_loss_and_grad(benchmark::State& state) {
    const auto problem = catalog("burgers-shock");
    const auto width = static_cast<std::size_t>(state.range(0));
    const auto n_f = static_cast<std::size_t>(state.range(1));
    const double viscosity = state.range(2) != 0 ? 0.01 : 0.0;

    const MlpParams params = init_params(width, 1);
    LossGradEvaluator evaluator(problem.flux, viscosity,
                                sample_collocation(problem, n_f, 100, 2));
    Eigen::VectorXd grad;
    for (auto _ : state) {
        const auto losses = evaluator.loss_and_grad(params, grad);
        benchmark::DoNotOptimize(losses.f);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n_f));
}

}  // namespace

BENCHMARK(bm_loss_and_grad)
    ->Args({40, 10000, 1})
    ->Args({40, 10000, 0})
    ->Args({60, 10000, 1})
    ->Unit(benchmark::kMillisecond);
