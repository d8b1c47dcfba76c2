#include "sandnet/cascade.hpp"
#include "sandnet/engine.hpp"
#include "sandnet/rng.hpp"
#include "sandnet/standard.hpp"

#include <benchmark/benchmark.h>

#include <memory>

using namespace sandnet;

namespace {

Configuration random_heights(const Network& net, Height max_exclusive, std::uint64_t seed) {
    Rng rng(seed);
    Configuration z(net.size());
    for (auto& h : z) h = static_cast<Height>(rng.below(static_cast<std::uint64_t>(max_exclusive)));
    return z;
}

void BM_StabilizeOpen(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const Network net = Network::grid({side, Neighborhood::Moore});
    const Configuration z = random_heights(net, 16, 42);
    for (auto _ : state) {
        auto [settled, trace] = stabilize_open(net, z);
        benchmark::DoNotOptimize(settled);
        benchmark::DoNotOptimize(trace.topplings);
    }
    state.SetItemsProcessed(state.iterations() * net.size());
}
BENCHMARK(BM_StabilizeOpen)->Arg(9)->Arg(33)->Arg(65);

void BM_SrhStep(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const auto net = std::make_shared<const Network>(Network::grid({side, Neighborhood::Moore}));
    Configuration ground = random_heights(*net, 8, 7);
    ground[*net->hub() - 1] = 0;
    Perturbation w(net->size(), 0);
    w[*net->hub() - 1] = 12;
    for (auto _ : state) {
        const StepReport report = srh_step(net, ground, w);
        benchmark::DoNotOptimize(report.final_state);
    }
}
BENCHMARK(BM_SrhStep)->Arg(9)->Arg(33);

void BM_StandardStep(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const auto net = std::make_shared<const Network>(Network::grid({side, Neighborhood::Moore}));
    Configuration ground = random_heights(*net, 8, 11);
    ground[*net->hub() - 1] = 0;
    Perturbation w(net->size(), 0);
    w[*net->hub() - 1] = 12;
    for (auto _ : state) {
        const StepReport report = standard_step(net, ground, w, TieBreak::lowest_id());
        benchmark::DoNotOptimize(report.final_state);
    }
}
BENCHMARK(BM_StandardStep)->Arg(9)->Arg(33);

void BM_RunScenario(benchmark::State& state) {
    ScenarioSpec spec;
    spec.net = std::make_shared<const Network>(Network::grid({9, Neighborhood::Moore}));
    spec.ground_state = random_heights(*spec.net, 8, 3);
    spec.ground_state[*spec.net->hub() - 1] = 0;
    spec.strategy = Strategy::Srh;
    spec.steps = 32;
    spec.inflow = InflowGenerator{InflowGenerator::Sites::Uniform, {}, 6, 5};
    spec.dissipation = DissipationRandom{3, {6}};
    for (auto _ : state) {
        const RunReport run = run_scenario(spec);
        benchmark::DoNotOptimize(run.final_state);
    }
}
BENCHMARK(BM_RunScenario);

} // namespace

BENCHMARK_MAIN();
