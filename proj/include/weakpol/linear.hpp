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

#include <span>
#include <vector>

#include "weakpol/matrix.hpp"

namespace weakpol::linear {

enum class Penalty { l1, l2 };

struct LrParams {
  Penalty penalty = Penalty::l2;
  double c = 1.0;
  std::size_t max_iter = 5000;
  double tol = 1e-10;
};

/// Parameter vector layout: coefficients then intercept.
struct LrModel {
  std::vector<double> coef;
  double intercept = 0.0;

  double predict_proba(std::span<const double> x) const;
};

/// Mean weighted log loss plus, for L2, |beta|^2 / (2 C W) where W is the weight sum.
double smooth_loss(const Matrix& x, std::span<const int> y, std::span<const double> w, std::span<const double> theta,
                   const LrParams& params);
/// Gradient of smooth_loss with respect to theta.
std::vector<double> smooth_gradient(const Matrix& x, std::span<const int> y, std::span<const double> w,
                                    std::span<const double> theta, const LrParams& params);
/// smooth_loss plus, for L1, |beta|_1 / (C W).
double objective(const Matrix& x, std::span<const int> y, std::span<const double> w, std::span<const double> theta,
                 const LrParams& params);

/// Accelerated proximal gradient with backtracking and adaptive restart.
LrModel fit_lr(const Matrix& x, std::span<const int> y, std::span<const double> w, const LrParams& params);

}  // namespace weakpol::linear
