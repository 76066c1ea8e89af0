// Copyright 2026 The sqzsub Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "sqzsub/experiment.h"

using namespace sqzsub;

namespace {

Execution mode(const benchmark::State &state) {
    return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

Recipe balanced(int n) {
    std::vector<cd> c(n + 1, 1.0);
    return design_setup(TargetSpec::make(c, 0.0), 0.95, 0.25, SqueezingPolicy::explicit_input(squeezing_from_db(3.0)));
}

void BM_RunSequence(benchmark::State &state) {
    Recipe r = balanced(static_cast<int>(state.range(1)));
    EngineOptions opts{.execution = mode(state)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sequence(r.setup, opts));
    }
}
BENCHMARK(BM_RunSequence)->ArgsProduct({{0, 1}, {2, 4, 5}});

void BM_Fidelity(benchmark::State &state) {
    Recipe r = balanced(2);
    MixtureState m = run_sequence(r.setup);
    QuadratureOptions q{.points = 801, .execution = mode(state)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(fidelity(m, r.target, q));
    }
}
BENCHMARK(BM_Fidelity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_WignerGrid(benchmark::State &state) {
    Recipe r = balanced(2);
    MixtureState m = run_sequence(r.setup);
    for (auto _ : state) {
        benchmark::DoNotOptimize(export_wigner_grid(m, GridBounds{}, 256, mode(state)));
    }
}
BENCHMARK(BM_WignerGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State &state) {
    SweepSpec s;
    s.name = "bench";
    s.target = TargetSpec::make({1.0, 1.0}, 0.0);
    s.swept = SweptParameter::Eta;
    s.min = 0.05;
    s.max = 1.0;
    s.steps = 8;
    s.s_in_db = 1.66;
    QuadratureOptions q{.points = 401};
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sweep(s, mode(state), q));
    }
}
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
