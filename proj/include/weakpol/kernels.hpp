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

#pragma once

#include <cstddef>
#include <vector>

#include <omp.h>

#include "weakpol/matrix.hpp"

// Data-parallel kernels. Every kernel has a serial reference implementation
// and an OpenMP implementation that produces bit-identical output for any
// thread count; tests compare the two and bench/ times them.
namespace weakpol::kernels {

enum class Exec { serial, parallel };

/// Thread count used by parallel kernels (OpenMP). Default 1.
void set_num_threads(int n);
int num_threads();

/// Calls fn(i) for every i in [0, n). Iterations must be independent.
template <class F>
void for_each_index(std::size_t n, F&& fn, Exec exec = Exec::parallel) {
  if (exec == Exec::serial || num_threads() <= 1 || omp_in_parallel()) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(num_threads())
  for (long long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

/// For each row, the k nearest other rows by Euclidean distance, nearest
/// first; equal distances resolve to the lower row index.
using Neighbors = std::vector<std::vector<std::size_t>>;
Neighbors knn_serial(const Matrix& points, std::size_t k);
Neighbors knn_parallel(const Matrix& points, std::size_t k);

/// Pearson correlation between all column pairs (population moments). Pairs
/// involving a zero-variance column are NaN; the diagonal is 1 otherwise.
Matrix pearson_serial(const Matrix& x);
Matrix pearson_parallel(const Matrix& x);

}  // namespace weakpol::kernels
