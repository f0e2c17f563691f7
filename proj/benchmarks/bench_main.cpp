/**
 * Copyright 2026 Loopsampler Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include <random>

#include "loopsampler/fock.hpp"
#include "loopsampler/tomography.hpp"

using namespace loopsampler;

namespace {

ComplexMatrix random_complex(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(d(gen), d(gen));
    return m;
}

InterferometerSpec desk_spec(int modes, int loops, int iterations) {
    InterferometerSpec spec;
    spec.modes = modes;
    spec.loops = loops;
    spec.iterations = iterations;
    spec.unitary = random_unitary(modes, 1);
    spec.feedback_phases.assign(loops, 0.4);
    FockState s(modes - loops, 0);
    s[0] = 1;
    spec.injection.assign(iterations, s);
    return spec;
}

void BM_PermanentRyser(benchmark::State& state) {
    ComplexMatrix m = random_complex(static_cast<int>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(permanent_ryser(m));
}
BENCHMARK(BM_PermanentRyser)->DenseRange(6, 16, 2);

void BM_PermanentDirect(benchmark::State& state) {
    ComplexMatrix m = random_complex(static_cast<int>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(permanent_direct(m));
}
BENCHMARK(BM_PermanentDirect)->DenseRange(4, 8, 1);

void BM_FullDistribution(benchmark::State& state) {
    InterferometerSpec spec = desk_spec(static_cast<int>(state.range(0)), 1, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(full_distribution(spec, 2, SamplerKind::Quantum));
}
BENCHMARK(BM_FullDistribution)->DenseRange(4, 7, 1);

void BM_PhaseAverage(benchmark::State& state) {
    InterferometerSpec spec = desk_spec(5, 1, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            phase_average(spec, 2, static_cast<int>(state.range(0)), 3, SamplerKind::Quantum));
}
BENCHMARK(BM_PhaseAverage)->Arg(16)->Arg(64);

void BM_TomographyObjectiveGradient(benchmark::State& state) {
    int dim = static_cast<int>(state.range(0));
    ComplexMatrix truth = random_unitary(dim, 3);
    TomographyData data = synthesize_measurements(truth, {}, {}, dim * (dim - 1) / 2, 0.0, 5);
    MeshParameterization mesh = make_mesh(dim);
    Eigen::VectorXd params = Eigen::VectorXd::Constant(mesh.parameter_count(), 0.3);
    Eigen::VectorXd grad(mesh.parameter_count());
    for (auto _ : state)
        benchmark::DoNotOptimize(tomography_objective(data, mesh, params, 1.0, false, &grad));
}
BENCHMARK(BM_TomographyObjectiveGradient)->DenseRange(4, 8, 2);

} // namespace

BENCHMARK_MAIN();
