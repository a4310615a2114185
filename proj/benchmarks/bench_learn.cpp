#include <benchmark/benchmark.h>

#include <random>

#include "orghier/learn.hpp"
#include "orghier/rng.hpp"

using namespace orghier;

namespace {

LabeledMatrix make_table(std::size_t rows, std::size_t features, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    LabeledMatrix data;
    for (std::size_t f = 0; f < features; ++f)
        data.feature_names.push_back("f" + std::to_string(f));
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<double> row;
        double shift = r % 7 == 0 ? 3.0 : 0.0;
        for (std::size_t f = 0; f < features; ++f) row.push_back(rng_unit(rng) * 10 + shift);
        data.X.push_back(std::move(row));
        data.y.push_back(r % 7 == 0 ? 1 : 2);
    }
    return data;
}

}  // namespace

static void BM_Smote(benchmark::State& state) {
    auto data = make_table(static_cast<std::size_t>(state.range(0)), 16, 3);
    for (auto _ : state) benchmark::DoNotOptimize(smote(data, 5, 11));
}
BENCHMARK(BM_Smote)->Arg(150)->Arg(500);

static void BM_TreeFit(benchmark::State& state) {
    auto data = make_table(static_cast<std::size_t>(state.range(0)), 16, 3);
    for (auto _ : state) {
        DecisionTree tree;
        tree.fit(data, {10, 4}, 5);
        benchmark::DoNotOptimize(tree);
    }
}
BENCHMARK(BM_TreeFit)->Arg(150)->Arg(500);

static void BM_ForestFit(benchmark::State& state) {
    auto data = make_table(268, 16, 3);
    for (auto _ : state) {
        RandomForest forest;
        forest.fit(data, {{10, 4}, static_cast<int>(state.range(0)), true}, 5);
        benchmark::DoNotOptimize(forest);
    }
}
BENCHMARK(BM_ForestFit)->Arg(16)->Arg(64);

static void BM_GridSearchTree(benchmark::State& state) {
    auto data = make_table(150, 16, 3);
    HyperGrid grid;
    for (int d = 1; d <= 20; ++d) grid.max_depth.push_back(d);
    for (int f = 1; f <= 16; ++f) grid.max_features.push_back(f);
    for (auto _ : state)
        benchmark::DoNotOptimize(grid_search(data, grid, ModelKind::tree, 5, 9, 5, 2));
}
BENCHMARK(BM_GridSearchTree)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
