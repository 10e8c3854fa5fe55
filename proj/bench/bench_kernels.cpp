// Serial reference loops vs. the OpenMP kernels, plus whole-model training
// at one thread and at all threads.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "openset/dataset.hpp"
#include "openset/kernels.hpp"
#include "openset/rng.hpp"
#include "openset/targets.hpp"
#include "openset/trainer.hpp"

using namespace openset;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Xoshiro256 rng(seed);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (auto& v : m.row(i)) v = rng.uniform();
    }
    return m;
}

std::vector<double> random_vector(std::size_t n, double lo, double hi, std::uint64_t seed) {
    Xoshiro256 rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

// Rows = images, columns = 512 features as produced by a ResNet10 trunk.
constexpr std::size_t kFeatures = 512;

void BM_ResidualSerial(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_matrix(rows, kFeatures, 1);
    const auto x = random_vector(kFeatures, -0.01, 0.01, 2);
    const auto b = random_vector(rows, -0.2, 1.0, 3);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::residual(a, x, b));
}

void BM_ResidualParallel(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_matrix(rows, kFeatures, 1);
    const auto x = random_vector(kFeatures, -0.01, 0.01, 2);
    const auto b = random_vector(rows, -0.2, 1.0, 3);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::residual(a, x, b));
}

void BM_GradientSerial(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_matrix(rows, kFeatures, 1);
    const auto d = random_vector(rows, -1.0, 1.0, 4);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::exp_loss_gradient(a, d));
}

void BM_GradientParallel(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_matrix(rows, kFeatures, 1);
    const auto d = random_vector(rows, -1.0, 1.0, 4);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::exp_loss_gradient(a, d));
}

void BM_ScoresSerial(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const Matrix f = random_matrix(rows, kFeatures, 5);
    const Matrix w = random_matrix(kFeatures, 50, 6);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::scores(f, w));
}

void BM_ScoresParallel(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const Matrix f = random_matrix(rows, kFeatures, 5);
    const Matrix w = random_matrix(kFeatures, 50, 6);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::scores(f, w));
}

void BM_TrainModel(benchmark::State& state) {
    const int threads = static_cast<int>(state.range(0));
    const auto [train, val] = generate_synthetic(SynthSpec{10, 10, 64, 40, 1, 0.25, 7});
    const auto targets = build_target_matrix(train);
    TrainConfig cfg;
    cfg.epochs = 100;
    const int saved = omp_get_max_threads();
    omp_set_num_threads(threads);
    for (auto _ : state) benchmark::DoNotOptimize(train_model(train, targets, cfg));
    omp_set_num_threads(saved);
}

}  // namespace

BENCHMARK(BM_ResidualSerial)->Arg(400)->Arg(4000);
BENCHMARK(BM_ResidualParallel)->Arg(400)->Arg(4000);
BENCHMARK(BM_GradientSerial)->Arg(400)->Arg(4000);
BENCHMARK(BM_GradientParallel)->Arg(400)->Arg(4000);
BENCHMARK(BM_ScoresSerial)->Arg(400)->Arg(4000);
BENCHMARK(BM_ScoresParallel)->Arg(400)->Arg(4000);
BENCHMARK(BM_TrainModel)->Arg(1)->Arg(omp_get_num_procs())->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
