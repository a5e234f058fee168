#include "corners/homology.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <tuple>

using namespace corners;

namespace {

// Sparse +-1 matrix with `per_col` entries per column, roughly like a cellular boundary map.
SparseIntMatrix random_boundary(int rows, int cols, int per_col, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> row(0, rows - 1);
    std::vector<std::tuple<int, int, std::int64_t>> e;
    for (int c = 0; c < cols; ++c)
        for (int k = 0; k < per_col; ++k) e.emplace_back(row(rng), c, (rng() & 1) ? 1 : -1);
    return SparseIntMatrix::from_triplets(rows, cols, e);
}

void BM_rank_gf2(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto m = random_boundary(n, n + n / 4, 4, 1);
    for (auto _ : state) benchmark::DoNotOptimize(rank_gf2(m));
    state.SetComplexityN(n);
}

void BM_rank_rational(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto m = random_boundary(n, n + n / 4, 4, 2);
    for (auto _ : state) benchmark::DoNotOptimize(rank_rational(m));
    state.SetComplexityN(n);
}

void BM_rank_exact(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto m = random_boundary(n, n, 3, 3);
    for (auto _ : state) benchmark::DoNotOptimize(rank_exact(m));
}

}  // namespace

BENCHMARK(BM_rank_gf2)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_rank_rational)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_rank_exact)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
