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

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "weakpol/matrix.hpp"
#include "weakpol/rng.hpp"

namespace weakpol::testing {

/// Binary labels with at least `min_each` rows of each class.
inline std::vector<int> random_labels(Rng& rng, std::size_t n, double positive_rate, std::size_t min_each = 1) {
  std::vector<int> y(n);
  for (auto& v : y) v = rng.bernoulli(positive_rate) ? 1 : 0;
  std::size_t pos = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  for (std::size_t i = 0; pos < min_each && i < n; ++i)
    if (y[i] == 0) {
      y[i] = 1;
      ++pos;
    }
  std::size_t neg = n - pos;
  for (std::size_t i = n; neg < min_each && i-- > 0;)
    if (y[i] == 1) {
      y[i] = 0;
      ++neg;
    }
  return y;
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

/// Scores on a coarse grid so that ties are common.
inline std::vector<double> random_scores(Rng& rng, std::size_t n, int levels) {
  std::vector<double> s(n);
  for (auto& v : s) v = static_cast<double>(rng.below(static_cast<std::uint64_t>(levels))) / levels;
  return s;
}

/// Two Gaussian blobs shifted apart along every axis.
inline Matrix blobs(Rng& rng, const std::vector<int>& y, std::size_t cols, double shift) {
  Matrix m(y.size(), cols);
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal() + (y[i] == 1 ? shift : 0.0);
  return m;
}

inline std::string random_word(Rng& rng, std::size_t len) {
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += static_cast<char>('a' + rng.below(26));
  return s;
}

}  // namespace weakpol::testing
