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

#include "weakpol/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace weakpol::kernels {

namespace {

int g_threads = 1;

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

std::vector<std::size_t> knn_row(const Matrix& points, std::size_t i, std::size_t k,
                                 std::vector<std::pair<double, std::size_t>>& scratch) {
  scratch.clear();
  const auto xi = points.row(i);
  for (std::size_t j = 0; j < points.rows(); ++j)
    if (j != i) scratch.emplace_back(squared_distance(xi, points.row(j)), j);
  const std::size_t kk = std::min(k, scratch.size());
  std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(kk), scratch.end());
  std::vector<std::size_t> out(kk);
  for (std::size_t t = 0; t < kk; ++t) out[t] = scratch[t].second;
  return out;
}

// Centered columns stored contiguously, plus the root of each sum of squares.
struct Centered {
  std::vector<std::vector<double>> cols;
  std::vector<double> norms;
};

Centered center_columns(const Matrix& x) {
  Centered c;
  const std::size_t n = x.rows();
  c.cols.resize(x.cols());
  c.norms.resize(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    auto& col = c.cols[j];
    col = x.column(j);
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double& v : col) {
      v -= mean;
      ss += v * v;
    }
    c.norms[j] = std::sqrt(ss);
  }
  return c;
}

double correlation(const Centered& c, std::size_t a, std::size_t b) {
  if (c.norms[a] == 0.0 || c.norms[b] == 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (a == b) return 1.0;
  const auto& x = c.cols[a];
  const auto& y = c.cols[b];
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  const double r = s / (c.norms[a] * c.norms[b]);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

void set_num_threads(int n) { g_threads = std::max(1, n); }
int num_threads() { return g_threads; }

Neighbors knn_serial(const Matrix& points, std::size_t k) {
  Neighbors out(points.rows());
  std::vector<std::pair<double, std::size_t>> scratch;
  for (std::size_t i = 0; i < points.rows(); ++i) out[i] = knn_row(points, i, k, scratch);
  return out;
}

Neighbors knn_parallel(const Matrix& points, std::size_t k) {
  Neighbors out(points.rows());
  const auto n = static_cast<long long>(points.rows());
#pragma omp parallel num_threads(num_threads())
  {
    std::vector<std::pair<double, std::size_t>> scratch;
#pragma omp for schedule(dynamic, 8)
    for (long long i = 0; i < n; ++i) out[i] = knn_row(points, static_cast<std::size_t>(i), k, scratch);
  }
  return out;
}

Matrix pearson_serial(const Matrix& x) {
  const Centered c = center_columns(x);
  const std::size_t f = x.cols();
  Matrix r(f, f);
  for (std::size_t a = 0; a < f; ++a)
    for (std::size_t b = a; b < f; ++b) r(a, b) = r(b, a) = correlation(c, a, b);
  return r;
}

Matrix pearson_parallel(const Matrix& x) {
  const Centered c = center_columns(x);
  const std::size_t f = x.cols();
  Matrix r(f, f);
  const auto nf = static_cast<long long>(f);
#pragma omp parallel for schedule(dynamic, 1) num_threads(num_threads())
  for (long long a = 0; a < nf; ++a)
    for (std::size_t b = static_cast<std::size_t>(a); b < f; ++b)
      r(static_cast<std::size_t>(a), b) = r(b, static_cast<std::size_t>(a)) = correlation(c, static_cast<std::size_t>(a), b);
  return r;
}

}  // namespace weakpol::kernels
