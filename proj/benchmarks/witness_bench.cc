// Copyright 2026 The phasewitness Authors
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

#include <random>

#include "benchmark/benchmark.h"
#include "phasewitness/montecarlo.h"
#include "phasewitness/optimize.h"

using namespace phasewitness;

namespace {

void BM_closed_form_witness(benchmark::State& state) {
    StateModel model = TwoModeSqueezed{SqueezingParameter(0.4)};
    MeasurementSettings s{0.1, -0.4, -0.1, 0.4};
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(model, s, Efficiency(0.7)).value);
    }
}
BENCHMARK(BM_closed_form_witness);

void BM_fock_two_mode_value(benchmark::State& state) {
    const double r = state.range(0) / 10.0;
    FockWignerEvaluator ev(build_state(TwoModeSqueezed{SqueezingParameter(r)}), 1.5);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ev.two_mode(PhasePoint(u(rng), u(rng)), PhasePoint(u(rng), u(rng)), Efficiency(0.7)).value);
    }
    state.counters["dim"] = ev.state().dim();
}
BENCHMARK(BM_fock_two_mode_value)->Arg(4)->Arg(8)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_displacement_basis(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        DisplacementBasis basis(n);
        benchmark::DoNotOptimize(basis.slab(PhasePoint(0.7, -0.3), n / 2));
    }
}
BENCHMARK(BM_displacement_basis)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_maximize_witness(benchmark::State& state) {
    StateModel model = SinglePhotonEntangled{};
    for (auto _ : state) {
        benchmark::DoNotOptimize(maximize_witness(model, Efficiency(0.8)).best_abs);
    }
}
BENCHMARK(BM_maximize_witness)->Unit(benchmark::kMillisecond);

void BM_sample_joint_counts(benchmark::State& state) {
    auto rho = build_state(TwoModeSqueezed{SqueezingParameter(0.4)});
    const long long shots = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sample_joint_counts(rho, PhasePoint(0.2), PhasePoint(-0.3), SampleSpec(shots, 7, Efficiency(0.7))).shots);
    }
    state.SetItemsProcessed(state.iterations() * shots);
}
BENCHMARK(BM_sample_joint_counts)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
