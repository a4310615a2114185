#include <benchmark/benchmark.h>

#include <random>

#include "orghier/features.hpp"
#include "orghier/graph.hpp"
#include "orghier/rng.hpp"

using namespace orghier;

namespace {

SocialNetwork make_network(std::size_t n, double edge_prob, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Roster roster;
    std::vector<EmailRecord> records;
    char buf[32];
    auto id_of = [&](std::size_t i) {
        std::snprintf(buf, sizeof(buf), "e%04zu", i);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < n; ++i) roster.levels[id_of(i)] = 3;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || rng_unit(rng) >= edge_prob) continue;
            auto count = 1 + rng_index(rng, 20);
            for (std::size_t c = 0; c < count; ++c)
                records.push_back({id_of(i), id_of(j), static_cast<std::int64_t>(1262304000 + c)});
        }
    return SocialNetwork::build(records, roster);
}

}  // namespace

static void BM_Betweenness(benchmark::State& state) {
    auto net = make_network(static_cast<std::size_t>(state.range(0)), 0.08, 7);
    for (auto _ : state) benchmark::DoNotOptimize(betweenness(net));
}
BENCHMARK(BM_Betweenness)->Arg(50)->Arg(150)->Arg(300);

static void BM_Closeness(benchmark::State& state) {
    auto net = make_network(static_cast<std::size_t>(state.range(0)), 0.08, 7);
    for (auto _ : state) benchmark::DoNotOptimize(closeness(net));
}
BENCHMARK(BM_Closeness)->Arg(50)->Arg(150)->Arg(300);

static void BM_Pagerank(benchmark::State& state) {
    auto net = make_network(static_cast<std::size_t>(state.range(0)), 0.08, 7);
    for (auto _ : state) benchmark::DoNotOptimize(pagerank(net));
}
BENCHMARK(BM_Pagerank)->Arg(150)->Arg(300);

static void BM_Hits(benchmark::State& state) {
    auto net = make_network(static_cast<std::size_t>(state.range(0)), 0.08, 7);
    for (auto _ : state) benchmark::DoNotOptimize(hits(net));
}
BENCHMARK(BM_Hits)->Arg(150)->Arg(300);

static void BM_CliqueStats(benchmark::State& state) {
    auto net = make_network(static_cast<std::size_t>(state.range(0)), 0.15, 7);
    for (auto _ : state) benchmark::DoNotOptimize(clique_stats(net));
}
BENCHMARK(BM_CliqueStats)->Arg(50)->Arg(150);

BENCHMARK_MAIN();
