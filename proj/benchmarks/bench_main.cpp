#include <benchmark/benchmark.h>

#include "hgrl/certify.hpp"
#include "hgrl/fixtures.hpp"

using namespace hgrl;

static void BM_ValueEngineGrid(benchmark::State& state) {
    const auto g = build_gridworld({});
    const auto horizon = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        ValueEngine engine(g.process, std::nullopt, 0.9);
        benchmark::DoNotOptimize(engine.v(History{}, horizon));
    }
}
BENCHMARK(BM_ValueEngineGrid)->Arg(50)->Arg(300);

static void BM_ValueEngineRandom(benchmark::State& state) {
    const auto rp = random_process({.seed = 1, .observations = 3, .actions = 3, .rewards = 2, .memory = 2});
    for (auto _ : state) {
        ValueEngine engine(rp.process, rp.policy, 0.9);
        benchmark::DoNotOptimize(engine.v(History{}, static_cast<std::size_t>(state.range(0))));
    }
}
BENCHMARK(BM_ValueEngineRandom)->Arg(10)->Arg(40);

static void BM_ValueIteration(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto m = random_mdp(7, n, 4);
    for (auto _ : state) benchmark::DoNotOptimize(value_iteration(m, 0.95));
}
BENCHMARK(BM_ValueIteration)->Arg(16)->Arg(128)->Arg(512);

static void BM_PolicyEvaluation(benchmark::State& state) {
    const auto m = random_mdp(7, static_cast<std::size_t>(state.range(0)), 4);
    const auto pi = value_iteration(m, 0.95).policy;
    for (auto _ : state) benchmark::DoNotOptimize(policy_evaluation(m, pi, 0.95));
}
BENCHMARK(BM_PolicyEvaluation)->Arg(16)->Arg(128);

static void BM_SurrogateGrid(benchmark::State& state) {
    const auto g = build_gridworld({});
    const HomomorphismIndex index(g.diagonal, enumerate_histories(g.process, static_cast<std::size_t>(state.range(0))),
                                  g.process.alphabets().num_actions());
    const auto induced = induce_process(g.process, g.diagonal);
    for (auto _ : state) {
        const auto inverse = build_inverse(index, InverseMode::visitation, g.process);
        benchmark::DoNotOptimize(surrogate_mdp(induced, inverse));
    }
}
BENCHMARK(BM_SurrogateGrid)->Arg(2)->Arg(3);

static void BM_CertifyGrid(benchmark::State& state) {
    const auto g = build_gridworld({});
    const auto hs = enumerate_histories(g.process, 3);
    for (auto _ : state) {
        Certifier c(g.process, g.diagonal, hs, {0.9, 100});
        for (auto k : all_certificate_kinds()) benchmark::DoNotOptimize(c.certify(k));
    }
}
BENCHMARK(BM_CertifyGrid)->Unit(benchmark::kMillisecond);

static void BM_QUniformMap(benchmark::State& state) {
    const auto rp = random_process({.seed = 3, .observations = 3, .actions = 3, .rewards = 2, .memory = 1});
    for (auto _ : state) benchmark::DoNotOptimize(build_q_uniform_map(rp.process, 0.05, {0.5, 10}));
}
BENCHMARK(BM_QUniformMap);
BENCHMARK_MAIN();
