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

#include "weakpol/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "weakpol/common.hpp"

namespace weakpol::linear {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double margin(std::span<const double> row, std::span<const double> theta) {
  double z = theta.back();
  for (std::size_t j = 0; j < row.size(); ++j) z += row[j] * theta[j];
  return z;
}

double weight_sum(std::span<const double> w) { return std::accumulate(w.begin(), w.end(), 0.0); }

double l1_norm(std::span<const double> theta) {
  double s = 0;
  for (std::size_t j = 0; j + 1 < theta.size(); ++j) s += std::abs(theta[j]);
  return s;
}

}  // namespace

double LrModel::predict_proba(std::span<const double> x) const {
  double z = intercept;
  for (std::size_t j = 0; j < x.size(); ++j) z += x[j] * coef[j];
  return sigmoid(z);
}

double smooth_loss(const Matrix& x, std::span<const int> y, std::span<const double> w, std::span<const double> theta,
                   const LrParams& params) {
  const double wsum = weight_sum(w);
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double z = margin(x.row(i), theta);
    loss += w[i] * (softplus(z) - (y[i] == 1 ? z : 0.0));
  }
  loss /= wsum;
  if (params.penalty == Penalty::l2) {
    double sq = 0;
    for (std::size_t j = 0; j + 1 < theta.size(); ++j) sq += theta[j] * theta[j];
    loss += sq / (2.0 * params.c * wsum);
  }
  return loss;
}

std::vector<double> smooth_gradient(const Matrix& x, std::span<const int> y, std::span<const double> w,
                                    std::span<const double> theta, const LrParams& params) {
  const double wsum = weight_sum(w);
  const std::size_t f = x.cols();
  std::vector<double> g(f + 1, 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    const double r = w[i] * (sigmoid(margin(row, theta)) - (y[i] == 1 ? 1.0 : 0.0));
    for (std::size_t j = 0; j < f; ++j) g[j] += r * row[j];
    g[f] += r;
  }
  for (double& v : g) v /= wsum;
  if (params.penalty == Penalty::l2)
    for (std::size_t j = 0; j < f; ++j) g[j] += theta[j] / (params.c * wsum);
  return g;
}

double objective(const Matrix& x, std::span<const int> y, std::span<const double> w, std::span<const double> theta,
                 const LrParams& params) {
  double v = smooth_loss(x, y, w, theta, params);
  if (params.penalty == Penalty::l1) v += l1_norm(theta) / (params.c * weight_sum(w));
  return v;
}

LrModel fit_lr(const Matrix& x, std::span<const int> y, std::span<const double> w, const LrParams& params) {
  if (!(params.c > 0)) throw Error("logistic regression: C must be positive");
  const std::size_t f = x.cols();
  const double wsum = weight_sum(w);
  const double l1 = params.penalty == Penalty::l1 ? 1.0 / (params.c * wsum) : 0.0;

  std::vector<double> theta(f + 1, 0.0);
  double wpos = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] == 1) wpos += w[i];
  const double prev = std::clamp(wpos / wsum, 1e-12, 1 - 1e-12);
  theta[f] = std::log(prev / (1 - prev));

  auto prox = [&](std::vector<double>& v, double step) {
    if (l1 == 0) return;
    const double t = l1 * step;
    for (std::size_t j = 0; j < f; ++j) v[j] = v[j] > t ? v[j] - t : v[j] < -t ? v[j] + t : 0.0;
  };
  auto full = [&](std::span<const double> th) {
    return smooth_loss(x, y, w, th, params) + (l1 > 0 ? l1 * l1_norm(th) : 0.0);
  };

  double lip = 1.0;
  std::vector<double> yk = theta, z(f + 1), diff(f + 1);
  double t = 1.0;
  double f_theta = full(theta);
  for (std::size_t iter = 0; iter < params.max_iter; ++iter) {
    const double fy = smooth_loss(x, y, w, yk, params);
    const auto gy = smooth_gradient(x, y, w, yk, params);
    double fz = 0;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t j = 0; j <= f; ++j) z[j] = yk[j] - gy[j] / lip;
      prox(z, 1.0 / lip);
      double lin = 0, sq = 0;
      for (std::size_t j = 0; j <= f; ++j) {
        const double d = z[j] - yk[j];
        lin += gy[j] * d;
        sq += d * d;
      }
      fz = smooth_loss(x, y, w, z, params);
      if (fz <= fy + lin + 0.5 * lip * sq + 1e-15 * std::abs(fy)) break;
      lip *= 2.0;
    }
    const double fz_full = fz + (l1 > 0 ? l1 * l1_norm(z) : 0.0);
    double step = 0, scale = 0;
    for (std::size_t j = 0; j <= f; ++j) {
      step = std::max(step, std::abs(z[j] - theta[j]));
      scale = std::max(scale, std::abs(z[j]));
    }
    if (fz_full > f_theta) {
      // Momentum overshoot: restart from the current iterate.
      if (t == 1.0) break;
      t = 1.0;
      yk = theta;
      continue;
    }
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    for (std::size_t j = 0; j <= f; ++j) {
      diff[j] = z[j] - theta[j];
      yk[j] = z[j] + ((t - 1.0) / t_next) * diff[j];
    }
    theta = z;
    f_theta = fz_full;
    t = t_next;
    lip *= 0.95;
    if (step <= params.tol * (1.0 + scale)) break;
  }
  LrModel m;
  m.coef.assign(theta.begin(), theta.end() - 1);
  m.intercept = theta.back();
  return m;
}

}  // namespace weakpol::linear
