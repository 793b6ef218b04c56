// Copyright 2026 The Framescale Authors.
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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "framescale/kernels.hpp"
#include "framescale/rng.hpp"

namespace fs = framescale;
namespace kernels = framescale::kernels;

namespace {

fs::Matrix vectors(int d, int n) {
  fs::Engine engine = fs::make_engine(1, "bench");
  return fs::gaussian_matrix(engine, d, n);
}

template <bool Parallel>
void BM_FrameOperator(benchmark::State& state) {
  const fs::Matrix u = vectors(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? kernels::parallel::frame_operator(u)
                                      : kernels::serial::frame_operator(u));
  }
}

template <bool Parallel>
void BM_SubsetRanks(benchmark::State& state) {
  const fs::Matrix u = vectors(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? kernels::parallel::subset_ranks(u, fs::kRankTolerance)
                                      : kernels::serial::subset_ranks(u, fs::kRankTolerance));
  }
}

template <bool Parallel>
void BM_GeneralPosition(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const fs::Matrix u = vectors(d, static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Parallel ? kernels::parallel::first_dependent_subset(u, d, fs::kRankTolerance)
                 : kernels::serial::first_dependent_subset(u, d, fs::kRankTolerance));
  }
}

}  // namespace

BENCHMARK(BM_FrameOperator<false>)->Args({8, 4096})->Args({32, 16384});
BENCHMARK(BM_FrameOperator<true>)->Args({8, 4096})->Args({32, 16384});
BENCHMARK(BM_SubsetRanks<false>)->Args({4, 12})->Args({6, 16});
BENCHMARK(BM_SubsetRanks<true>)->Args({4, 12})->Args({6, 16});
BENCHMARK(BM_GeneralPosition<false>)->Args({4, 16})->Args({6, 20});
BENCHMARK(BM_GeneralPosition<true>)->Args({4, 16})->Args({6, 20});

BENCHMARK_MAIN();
