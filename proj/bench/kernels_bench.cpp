// Copyright 2026 The weakpol Authors. All Rights Reserved.
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

#include "weakpol/features.hpp"
#include "weakpol/imbalance.hpp"
#include "weakpol/kernels.hpp"
#include "weakpol/rng.hpp"

namespace {

using weakpol::Matrix;

Matrix points(std::size_t rows, std::size_t cols) {
  weakpol::Rng rng(1);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

void BM_KnnSerial(benchmark::State& state) {
  const Matrix m = points(static_cast<std::size_t>(state.range(0)), 60);
  for (auto _ : state) benchmark::DoNotOptimize(weakpol::kernels::knn_serial(m, 5));
}

void BM_KnnParallel(benchmark::State& state) {
  const Matrix m = points(static_cast<std::size_t>(state.range(0)), 60);
  for (auto _ : state) benchmark::DoNotOptimize(weakpol::kernels::knn_parallel(m, 5));
}

void BM_PearsonSerial(benchmark::State& state) {
  const Matrix m = points(static_cast<std::size_t>(state.range(0)), 60);
  for (auto _ : state) benchmark::DoNotOptimize(weakpol::kernels::pearson_serial(m));
}

void BM_PearsonParallel(benchmark::State& state) {
  const Matrix m = points(static_cast<std::size_t>(state.range(0)), 60);
  for (auto _ : state) benchmark::DoNotOptimize(weakpol::kernels::pearson_parallel(m));
}

void BM_Smote(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Matrix m = points(n, 60);
  std::vector<int> y(n, 0);
  for (std::size_t i = 0; i < n / 20; ++i) y[i * 20] = 1;
  weakpol::SmoteConfig c;
  c.exec = state.range(1) ? weakpol::kernels::Exec::parallel : weakpol::kernels::Exec::serial;
  for (auto _ : state) benchmark::DoNotOptimize(weakpol::smote_oversample(m, y, c));
}

BENCHMARK(BM_KnnSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnParallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PearsonSerial)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PearsonParallel)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Smote)->Args({20000, 0})->Args({20000, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
