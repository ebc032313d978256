// Microbenchmarks for the hot paths: metric scoring, estimator fits, and
// the attention forward pass.
#include <benchmark/benchmark.h>

#include <random>

#include "socbench/linear.hpp"
#include "socbench/metrics.hpp"
#include "socbench/transformer.hpp"
#include "socbench/tree.hpp"

using namespace soc;

namespace {

Matrix random_matrix(std::size_t n, std::size_t p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Matrix X(n, p);
    for (double& v : X.data) v = gauss(rng);
    return X;
}

Vector linear_target(const Matrix& X, double noise, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Vector y(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) {
        y[i] = 1.0;
        for (std::size_t j = 0; j < X.cols; ++j) y[i] += (j % 2 ? -0.5 : 0.8) * X(i, j);
        y[i] += noise * gauss(rng);
    }
    return y;
}

void standardize_columns(Matrix& X) {
    for (std::size_t j = 0; j < X.cols; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < X.rows; ++i) mean += X(i, j);
        mean /= static_cast<double>(X.rows);
        double var = 0.0;
        for (std::size_t i = 0; i < X.rows; ++i) var += (X(i, j) - mean) * (X(i, j) - mean);
        const double std = std::sqrt(var / static_cast<double>(X.rows));
        for (std::size_t i = 0; i < X.rows; ++i) X(i, j) = (X(i, j) - mean) / std;
    }
}

void bm_score(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> gauss;
    Vector y(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = gauss(rng);
        pred[i] = y[i] + 0.1 * gauss(rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(score(y, pred));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(bm_score)->Arg(1000)->Arg(100000);

void bm_ols_fit(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    Matrix X = random_matrix(n, 8, 2);
    Vector y = linear_target(X, 0.1, 3);
    for (auto _ : state) benchmark::DoNotOptimize(ols_fit(X, y));
}
BENCHMARK(bm_ols_fit)->Arg(1000)->Arg(10000);

void bm_lasso_fit(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    Matrix X = random_matrix(n, 8, 4);
    standardize_columns(X);
    Vector y = linear_target(X, 0.1, 5);
    for (auto _ : state) benchmark::DoNotOptimize(lasso_fit(X, y, 0.01));
}
BENCHMARK(bm_lasso_fit)->Arg(1000)->Arg(10000);

void bm_tree_fit(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    Matrix X = random_matrix(n, 4, 6);
    Vector y = linear_target(X, 0.3, 7);
    TreeConfig config;
    config.max_depth = 8;
    for (auto _ : state) benchmark::DoNotOptimize(tree_fit(X, y, config));
}
BENCHMARK(bm_tree_fit)->Arg(1000)->Arg(10000);

void bm_attention_forward(benchmark::State& state) {
    const std::size_t batch = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(8);
    MultiHeadAttention mha(32, 4, rng);
    std::normal_distribution<double> gauss;
    Tensor x({batch, 1, 32});
    for (auto& v : x.data()) v = gauss(rng);
    for (auto _ : state) benchmark::DoNotOptimize(mha.forward(x, x, x));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(batch));
}
BENCHMARK(bm_attention_forward)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
