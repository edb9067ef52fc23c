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

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "weakpol/matrix.hpp"

namespace weakpol::mlp {

enum class Activation { relu, tanh };
enum class Schedule { constant, adaptive };

struct MlpParams {
  std::vector<std::size_t> hidden{64};
  Activation activation = Activation::relu;
  Schedule schedule = Schedule::constant;
  double learning_rate = 1e-3;
  double alpha = 1e-4;  // L2 strength
  std::size_t batch_size = 64;
  std::size_t max_epochs = 200;
  std::size_t patience = 10;
  double validation_fraction = 0.1;
  double tol = 1e-4;
  std::uint64_t seed = 0;
};

/// Fully connected network with a single sigmoid output unit.
struct Network {
  std::vector<std::size_t> sizes;  // input, hidden..., 1
  Activation activation = Activation::relu;
  std::vector<double> params;       // per layer: weights (out x in, row-major) then biases

  std::size_t n_params() const { return params.size(); }
  double predict_proba(std::span<const double> x) const;

  nlohmann::json to_json() const;
  static Network from_json(const nlohmann::json& j);
};

Network init_network(std::size_t n_inputs, const std::vector<std::size_t>& hidden, Activation activation,
                     std::uint64_t seed);

/// Weighted mean cross-entropy over `rows` plus alpha/2 * |weights|^2 / W,
/// where W is the weight sum over `rows`. Biases are not penalized.
double loss(const Network& net, const Matrix& x, std::span<const int> y, std::span<const double> w,
            std::span<const std::size_t> rows, double alpha);
/// Loss and its gradient with respect to net.params.
double loss_and_gradient(const Network& net, const Matrix& x, std::span<const int> y, std::span<const double> w,
                         std::span<const std::size_t> rows, double alpha, std::vector<double>& grad);

/// Adam on mini-batches; early stopping on a held-out share of the rows.
Network fit_mlp(const Matrix& x, std::span<const int> y, std::span<const double> w, const MlpParams& params);

}  // namespace weakpol::mlp
