// Copyright 2026 The qpdual Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "qpdual/diagnostics.hpp"
#include "qpdual/lyapunov.hpp"
#include "qpdual/model.hpp"
#include "qpdual/spectra.hpp"

namespace {

using namespace qpdual;

void BM_Assemble(benchmark::State& state) {
  const ModelSpec spec = power_law_model(3.0, 1.0, 10, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonian(spec));
}
BENCHMARK(BM_Assemble)->Arg(610)->Arg(2584)->Unit(benchmark::kMillisecond);

void BM_DenseVectors(benchmark::State& state) {
  const ModelSpec spec = power_law_model(3.0, 1.0, 2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve(spec, SolverPath::Dense));
}
BENCHMARK(BM_DenseVectors)->Arg(377)->Arg(987)->Unit(benchmark::kMillisecond);

void BM_BandedVectors(benchmark::State& state) {
  const ModelSpec spec = power_law_model(3.0, 1.0, static_cast<int>(state.range(1)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve(spec, SolverPath::Banded));
}
BENCHMARK(BM_BandedVectors)->Args({987, 2})->Args({2584, 2})->Args({2584, 10})->Unit(benchmark::kMillisecond);

// The values-only path is what drives the large-N spacing statistics.
void BM_BandedValues(benchmark::State& state) {
  const ModelSpec spec = power_law_model(3.0, 1.0, 2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_values(spec, SolverPath::Banded));
}
BENCHMARK(BM_BandedValues)->Arg(2584)->Arg(28657)->Unit(benchmark::kMillisecond);

void BM_Diagnostics(benchmark::State& state) {
  const SpectrumResult spectrum = solve(power_law_b_infinity(3.0, 2, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(compute_diagnostics(spectrum));
}
BENCHMARK(BM_Diagnostics)->Arg(987)->Arg(2584)->Unit(benchmark::kMillisecond);

void BM_LyapunovSpectrum(benchmark::State& state) {
  const ModelSpec spec = power_law_a_infinity(3.0, 2, static_cast<int>(state.range(0)));
  const Eigen::VectorXd values = solve_values(spec);
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_spectrum(spec, values));
}
BENCHMARK(BM_LyapunovSpectrum)->Arg(2584)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
