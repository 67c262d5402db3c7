// Microbenchmarks over seeded synthetic instances, so numbers are stable
// across machines up to hardware speed. Not registered with ctest; run the
// binary directly.

#include <benchmark/benchmark.h>

#include <vector>

#include "qoscompose/beam.hpp"
#include "qoscompose/depgraph.hpp"
#include "qoscompose/generator.hpp"
#include "qoscompose/metrics.hpp"
#include "qoscompose/model.hpp"
#include "qoscompose/nsga.hpp"
#include "qoscompose/optimal.hpp"
#include "qoscompose/preprocess.hpp"
#include "qoscompose/rng.hpp"

namespace {

using namespace qosc;

SyntheticInstance instance(std::size_t services, std::size_t names_per_tier) {
    SyntheticSpec spec;
    spec.seed = 1;
    spec.services = services;
    spec.names_per_tier = names_per_tier;
    return gen_instance(spec);
}

void BM_Preprocess(benchmark::State& state) {
    // A small name pool forces interface collisions, so clustering and the
    // per-cluster skyline both do real work.
    const SyntheticInstance inst =
        instance(static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) {
        const ClusteredRepository c = preprocess(inst.repo);
        benchmark::DoNotOptimize(c.repo.services.size());
    }
}
BENCHMARK(BM_Preprocess)->Arg(100)->Arg(1000);

void BM_BuildGraph(benchmark::State& state) {
    const SyntheticInstance inst =
        instance(static_cast<std::size_t>(state.range(0)), 12);
    const ClusteredRepository clustered = preprocess(inst.repo);
    for (auto _ : state) {
        const DepGraph g = build_dependency_graph(clustered, inst.query);
        benchmark::DoNotOptimize(g.nodes.size());
    }
}
BENCHMARK(BM_BuildGraph)->Arg(100)->Arg(1000);

void BM_SolveOptimal(benchmark::State& state) {
    SyntheticSpec spec;
    spec.seed = 3;
    spec.services = static_cast<std::size_t>(state.range(0));
    spec.tiers = 3;
    spec.names_per_tier = 3;
    spec.max_offers = 2;
    const SyntheticInstance inst = gen_instance(spec);
    const DepGraph g =
        build_dependency_graph(preprocess(inst.repo), inst.query);
    for (auto _ : state) {
        const FrontSet f = solve_optimal(g);
        benchmark::DoNotOptimize(f.entries.size());
    }
}
BENCHMARK(BM_SolveOptimal)->Arg(12)->Arg(24);

void BM_SolveBeam(benchmark::State& state) {
    const SyntheticInstance inst = instance(300, 12);
    const DepGraph g =
        build_dependency_graph(preprocess(inst.repo), inst.query);
    const BeamOptions opts{static_cast<std::size_t>(state.range(0))};
    for (auto _ : state) {
        const FrontSet f = solve_beam(g, opts);
        benchmark::DoNotOptimize(f.entries.size());
    }
}
BENCHMARK(BM_SolveBeam)->Arg(25)->Arg(100);

void BM_SolveNsga(benchmark::State& state) {
    const SyntheticInstance inst = instance(100, 12);
    const DepGraph g =
        build_dependency_graph(preprocess(inst.repo), inst.query);
    GaConfig cfg;
    cfg.population = 40;
    cfg.iterations = static_cast<std::size_t>(state.range(0));
    cfg.seed = 1;
    for (auto _ : state) {
        const FrontSet f = solve_nsga(g, cfg);
        benchmark::DoNotOptimize(f.entries.size());
    }
}
BENCHMARK(BM_SolveNsga)->Arg(50);

void BM_NonDominated(benchmark::State& state) {
    const ParamSet ps(
        {make_response_time(), make_throughput(), make_reliability()});

    Rng rng(17);
    std::vector<QosTuple> pool;
    for (int i = 0; i < state.range(0); ++i)
        pool.push_back({rng.uniform_real(100.0, 2000.0),
                        static_cast<double>(1 + rng.uniform(20)),
                        rng.uniform_real(0.65, 0.99)});
    for (auto _ : state) {
        const std::vector<std::size_t> idx = non_dominated_indices(ps, pool);
        benchmark::DoNotOptimize(idx.size());
    }
}
BENCHMARK(BM_NonDominated)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
