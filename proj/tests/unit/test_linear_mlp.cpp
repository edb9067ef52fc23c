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

#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "weakpol/common.hpp"
#include "weakpol/linear.hpp"
#include "weakpol/mlp.hpp"

namespace weakpol {
namespace {

TEST(Lr, GradientVanishesAtL2Optimum) {
  Rng rng(1);
  const auto y = testing::random_labels(rng, 200, 0.3, 10);
  const Matrix x = testing::blobs(rng, y, 3, 1.0);
  std::vector<double> w(y.size());
  for (auto& v : w) v = rng.uniform(0.5, 2.0);
  linear::LrParams p;
  p.c = 0.5;
  const auto m = linear::fit_lr(x, y, w, p);
  std::vector<double> theta = m.coef;
  theta.push_back(m.intercept);
  for (double g : linear::smooth_gradient(x, y, w, theta, p)) EXPECT_LT(std::abs(g), 1e-6);
}

TEST(Lr, L1ZeroesIrrelevantFeatures) {
  Rng rng(2);
  const auto y = testing::random_labels(rng, 400, 0.4, 10);
  Matrix x = testing::random_matrix(rng, 400, 6);
  for (std::size_t i = 0; i < 400; ++i) x(i, 0) += y[i] ? 2.0 : 0.0;
  const std::vector<double> w(400, 1.0);
  linear::LrParams p;
  p.penalty = linear::Penalty::l1;
  p.c = 0.01;
  const auto m = linear::fit_lr(x, y, w, p);
  EXPECT_GT(std::abs(m.coef[0]), 0.0);
  std::size_t zeros = 0;
  for (std::size_t j = 1; j < 6; ++j) zeros += m.coef[j] == 0.0;
  EXPECT_GE(zeros, 4u);
}

TEST(Lr, ObjectiveDecreasesWithL1) {
  Rng rng(3);
  const auto y = testing::random_labels(rng, 150, 0.3, 10);
  const Matrix x = testing::blobs(rng, y, 4, 0.8);
  const std::vector<double> w(150, 1.0);
  linear::LrParams p;
  p.penalty = linear::Penalty::l1;
  const auto m = linear::fit_lr(x, y, w, p);
  std::vector<double> theta = m.coef;
  theta.push_back(m.intercept);
  const double best = linear::objective(x, y, w, theta, p);
  for (int trial = 0; trial < 50; ++trial) {
    auto t = theta;
    t[rng.below(t.size())] += rng.uniform(-0.05, 0.05);
    EXPECT_GE(linear::objective(x, y, w, t, p), best - 1e-9);
  }
}

TEST(Mlp, LearnsXor) {
  Rng rng(4);
  Matrix x(400, 2);
  std::vector<int> y(400);
  for (std::size_t i = 0; i < 400; ++i) {
    x(i, 0) = rng.uniform(-1, 1);
    x(i, 1) = rng.uniform(-1, 1);
    y[i] = (x(i, 0) > 0) != (x(i, 1) > 0);
  }
  mlp::MlpParams p;
  p.hidden = {16};
  p.learning_rate = 0.01;
  p.max_epochs = 400;
  p.patience = 50;
  p.seed = 2;
  const auto net = mlp::fit_mlp(x, y, std::vector<double>(400, 1.0), p);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < 400; ++i) correct += (net.predict_proba(x.row(i)) >= 0.5) == (y[i] == 1);
  EXPECT_GT(correct, 340u);
  EXPECT_EQ(mlp::Network::from_json(net.to_json()).params, net.params);
}

TEST(Mlp, LossMatchesGradientCallAndSkipsBiasPenalty) {
  Rng rng(5);
  const auto y = testing::random_labels(rng, 30, 0.5);
  const Matrix x = testing::random_matrix(rng, 30, 3);
  const std::vector<double> w(30, 1.0);
  std::vector<std::size_t> rows(30);
  for (std::size_t i = 0; i < 30; ++i) rows[i] = i;
  auto net = mlp::init_network(3, {4}, mlp::Activation::tanh, 1);
  std::vector<double> grad;
  EXPECT_DOUBLE_EQ(mlp::loss_and_gradient(net, x, y, w, rows, 0.3, grad), mlp::loss(net, x, y, w, rows, 0.3));
  // The last parameter is the output bias; it carries no penalty.
  const double a = mlp::loss(net, x, y, w, rows, 0.0), b = mlp::loss(net, x, y, w, rows, 5.0);
  net.params.back() += 1.0;
  EXPECT_NEAR(mlp::loss(net, x, y, w, rows, 5.0) - mlp::loss(net, x, y, w, rows, 0.0), b - a, 1e-12);
}

}  // namespace
}  // namespace weakpol
