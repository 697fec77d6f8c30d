#include "catbench/bo/gp.hpp"
#include "catbench/kernels/posterior.hpp"
#include "catbench/kernels/random_forest.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace catbench;
using namespace catbench::kernels;

namespace {

std::vector<GPInput> categorical_inputs(std::size_t n, std::size_t dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<GPInput> out(n, GPInput(dims));
    for (auto& x : out)
        for (auto& v : x)
            v = static_cast<double>(rng() % 8);
    return out;
}

// Posterior over the whole candidate set, as one BO step needs it.
void posterior(benchmark::State& state, Execution exec) {
    const auto n_train = static_cast<std::size_t>(state.range(0));
    const auto n_cand = static_cast<std::size_t>(state.range(1));
    const auto train = categorical_inputs(n_train, 4, 1);
    std::vector<double> y;
    for (const auto& x : train)
        y.push_back(x[0] - 0.3 * x[2]);
    const auto model = bo::GPModel::with_hyperparameters(KernelKind::hamming_ard, train, y, {{1.0, 1.0, 1.0, 1.0}, 1.0, 1e-3});
    const auto cand = categorical_inputs(n_cand, 4, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(model.predict_batch(cand, exec));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n_cand));
}

void forest(benchmark::State& state, Execution exec) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(3);
    FeatureMatrix x(rows, 24);
    std::vector<double> y(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        x(r, rng() % 8) = 1.0;
        x(r, 8 + rng() % 8) = 1.0;
        x(r, 16 + rng() % 8) = 1.0;
        y[r] = static_cast<double>(rng() % 100);
    }
    for (auto _ : state) {
        RandomForestRegressor f({.n_trees = 200, .seed = 7});
        f.fit(x, y, exec);
        benchmark::DoNotOptimize(f.feature_importances());
    }
}

} // namespace

BENCHMARK_CAPTURE(posterior, serial, Execution::serial)->Args({20, 4096})->Args({60, 32768})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(posterior, parallel, Execution::parallel)->Args({20, 4096})->Args({60, 32768})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(forest, serial, Execution::serial)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(forest, parallel, Execution::parallel)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
