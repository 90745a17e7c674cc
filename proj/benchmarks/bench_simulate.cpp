#include <benchmark/benchmark.h>

#include "otsm/analysis.hpp"
#include "otsm/dynamics.hpp"

using namespace otsm;

namespace {

const PlantParams kPlant{0.1, 1.0};

dynamics::SimConfig config(double t_end) {
    dynamics::SimConfig cfg;
    cfg.t_end = t_end;
    cfg.initial = {-1.0, 0.0};
    return cfg;
}

void BM_SimulateUnperturbed(benchmark::State& state) {
    const auto cfg = config(static_cast<double>(state.range(0)));
    for (auto _ : state) {
        auto traj = dynamics::simulate(kPlant, control::OptimalSurface{0.6},
                                       dynamics::NoPerturbation{}, cfg);
        benchmark::DoNotOptimize(traj.samples.back());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(cfg.t_end / cfg.dt));
}
BENCHMARK(BM_SimulateUnperturbed)->Arg(2)->Arg(8);

void BM_SimulateFriction(benchmark::State& state) {
    const auto cfg = config(2.0);
    for (auto _ : state) {
        auto traj = dynamics::simulate(kPlant, control::OptimalSurface{0.6},
                                       dynamics::FrictionPerturbation{0.5, 1e5}, cfg);
        benchmark::DoNotOptimize(traj.samples.back());
    }
}
BENCHMARK(BM_SimulateFriction);

void BM_SimulateRandomBinary(benchmark::State& state) {
    const auto cfg = config(4.0);
    for (auto _ : state) {
        auto traj = dynamics::simulate(kPlant, control::OptimalSurface{0.6},
                                       dynamics::RandomBinaryPerturbation{0.5, 0.1, 1}, cfg);
        benchmark::DoNotOptimize(traj.samples.back());
    }
}
BENCHMARK(BM_SimulateRandomBinary);

void BM_Analyze(benchmark::State& state) {
    const auto traj = dynamics::simulate(kPlant, control::OptimalSurface{0.6},
                                         dynamics::NoPerturbation{}, config(2.0));
    for (auto _ : state) {
        auto report = analysis::analyze(traj, {}, 0.6);
        benchmark::DoNotOptimize(report.mode);
    }
}
BENCHMARK(BM_Analyze);

}  // namespace

BENCHMARK_MAIN();
