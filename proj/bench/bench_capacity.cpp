// SPDX-License-Identifier: Apache-2.0
//
// relaycap - capacity simulator for beamformed MIMO multi-relay networks
// Copyright (C) 2026 The relaycap authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Serial reference vs OpenMP trial loop and eigen pool.

#include <benchmark/benchmark.h>

#include <vector>

#include "relaycap/capacity.hpp"

using namespace relaycap;

namespace {

const std::vector<SchemeSetting> kSchemes{{BeamformerKind::mf, 0.0},
                                          {BeamformerKind::mf_zf, 0.0},
                                          {BeamformerKind::mf_rzf, 0.5}};

NetworkConfig bench_cfg(benchmark::State& state) {
  NetworkConfig cfg;
  cfg.k = static_cast<std::size_t>(state.range(0));
  cfg.e = 0.1;
  return cfg;
}

void BM_SimulateSerial(benchmark::State& state) {
  const auto cfg = bench_cfg(state);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_capacities_serial(kSchemes, cfg, 200, 1));
  state.SetItemsProcessed(state.iterations() * 200);
}

void BM_SimulateParallel(benchmark::State& state) {
  const auto cfg = bench_cfg(state);
  CapacityOptions opts;
  opts.workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_capacities(kSchemes, cfg, 200, 1, opts));
  state.SetItemsProcessed(state.iterations() * 200);
}

void BM_EigenSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sample_wishart_eigenvalues_serial(4, 6, 2000, 1));
}

void BM_EigenParallel(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_wishart_eigenvalues(4, 6, 2000, 1, workers));
}

}  // namespace

BENCHMARK(BM_SimulateSerial)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateParallel)->Args({10, 1})->Args({10, 4})->Args({40, 1})->Args({40, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EigenSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EigenParallel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
