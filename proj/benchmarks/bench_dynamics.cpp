#include <benchmark/benchmark.h>

#include "ddtea/experiment.hpp"
#include "ddtea/reservoir.hpp"
#include "ddtea/signal.hpp"
#include "ddtea/thiele.hpp"

using namespace ddtea;

namespace {

const ThieleParams kParams{5e7, -3e8, 2.0};  // synthetic default at zeta = 1.5

void BM_EvolveClosedForm(benchmark::State& state) {
    const double dt = 1e-9 * static_cast<double>(state.range(0));
    double s = 0.01;
    for (auto _ : state) {
        s = evolve_closed_form(kParams, 0.01, dt).s;
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_EvolveClosedForm)->Arg(1)->Arg(10)->Arg(100);

void BM_EvolveRk4(benchmark::State& state) {
    const double dt = 100e-9;
    const double step = dt / static_cast<double>(state.range(0));
    for (auto _ : state) {
        const double s = evolve_rk4(kParams, 0.01, dt, step).s;
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvolveRk4)->Arg(100)->Arg(10000)->Arg(100000);

void BM_CollectStates(benchmark::State& state) {
    const DeviceModel model = DeviceModel::synthetic_default();
    const ReservoirConfig rc;
    const LabeledSignal sig = generate_task(
        {.segments = static_cast<std::size_t>(state.range(0)), .samples_per_period = 12, .seed = 1});
    for (auto _ : state) {
        const StateMatrix m = collect_states(model, rc, sig);
        benchmark::DoNotOptimize(m.data.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(sig.size()) *
                            static_cast<long>(rc.n_virtual));
}
BENCHMARK(BM_CollectStates)->Arg(10)->Arg(100);

void BM_RunTrial(benchmark::State& state) {
    TrialConfig c;
    c.task.segments = 100;
    c.snr_db = 10.0;
    std::size_t rep = 0;
    for (auto _ : state) {
        const Metrics m = run_trial(c, rep++);
        benchmark::DoNotOptimize(m.accuracy);
    }
}
BENCHMARK(BM_RunTrial);

}  // namespace

BENCHMARK_MAIN();
