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

#include "weakpol/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "weakpol/common.hpp"
#include "weakpol/rng.hpp"

namespace weakpol::mlp {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double activate(double v, Activation a) { return a == Activation::relu ? (v > 0 ? v : 0.0) : std::tanh(v); }

// Derivative expressed through the activation output.
double activate_grad(double out, Activation a) { return a == Activation::relu ? (out > 0 ? 1.0 : 0.0) : 1.0 - out * out; }

std::vector<std::size_t> layer_offsets(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> off{0};
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) off.push_back(off.back() + sizes[l + 1] * sizes[l] + sizes[l + 1]);
  return off;
}

// Forward pass keeping every layer's outputs; returns the output logit.
double forward(const Network& net, const std::vector<std::size_t>& off, std::span<const double> x,
               std::vector<std::vector<double>>& acts) {
  const std::size_t layers = net.sizes.size() - 1;
  acts.resize(layers + 1);
  acts[0].assign(x.begin(), x.end());
  double logit = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = net.sizes[l], out = net.sizes[l + 1];
    const double* wt = net.params.data() + off[l];
    const double* b = wt + out * in;
    auto& a = acts[l + 1];
    a.resize(out);
    for (std::size_t o = 0; o < out; ++o) {
      double s = b[o];
      const double* wr = wt + o * in;
      for (std::size_t i = 0; i < in; ++i) s += wr[i] * acts[l][i];
      a[o] = l + 1 == layers ? s : activate(s, net.activation);
    }
    if (l + 1 == layers) logit = a[0];
  }
  return logit;
}

double penalty(const Network& net, const std::vector<std::size_t>& off) {
  double sq = 0;
  for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l) {
    const std::size_t n = net.sizes[l] * net.sizes[l + 1];
    for (std::size_t k = 0; k < n; ++k) sq += net.params[off[l] + k] * net.params[off[l] + k];
  }
  return sq;
}

}  // namespace

double Network::predict_proba(std::span<const double> x) const {
  std::vector<std::vector<double>> acts;
  return sigmoid(forward(*this, layer_offsets(sizes), x, acts));
}

nlohmann::json Network::to_json() const {
  return {{"sizes", sizes}, {"activation", activation == Activation::relu ? "relu" : "tanh"}, {"params", params}};
}

Network Network::from_json(const nlohmann::json& j) {
  Network n;
  n.sizes = j.at("sizes").get<std::vector<std::size_t>>();
  const auto act = j.at("activation").get<std::string>();
  if (act != "relu" && act != "tanh") throw Error("mlp: unknown activation '" + act + "'");
  n.activation = act == "relu" ? Activation::relu : Activation::tanh;
  n.params = j.at("params").get<std::vector<double>>();
  if (n.sizes.size() < 2 || n.sizes.back() != 1 || layer_offsets(n.sizes).back() != n.params.size())
    throw Error("mlp: parameter count does not match layer sizes");
  return n;
}

Network init_network(std::size_t n_inputs, const std::vector<std::size_t>& hidden, Activation activation,
                     std::uint64_t seed) {
  Network net;
  net.sizes.push_back(n_inputs);
  for (std::size_t h : hidden) {
    if (h == 0) throw Error("mlp: hidden layer size must be positive");
    net.sizes.push_back(h);
  }
  net.sizes.push_back(1);
  net.activation = activation;
  const auto off = layer_offsets(net.sizes);
  net.params.assign(off.back(), 0.0);
  Rng rng(derive_seed(seed, {hash_string("mlp-init")}));
  for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l) {
    const std::size_t in = net.sizes[l], out = net.sizes[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    for (std::size_t k = 0; k < in * out + out; ++k) net.params[off[l] + k] = rng.uniform(-bound, bound);
  }
  return net;
}

double loss(const Network& net, const Matrix& x, std::span<const int> y, std::span<const double> w,
            std::span<const std::size_t> rows, double alpha) {
  const auto off = layer_offsets(net.sizes);
  std::vector<std::vector<double>> acts;
  double total = 0, wsum = 0;
  for (std::size_t i : rows) {
    const double z = forward(net, off, x.row(i), acts);
    total += w[i] * (softplus(z) - (y[i] == 1 ? z : 0.0));
    wsum += w[i];
  }
  if (wsum <= 0) return 0.0;
  return total / wsum + 0.5 * alpha * penalty(net, off) / wsum;
}

double loss_and_gradient(const Network& net, const Matrix& x, std::span<const int> y, std::span<const double> w,
                         std::span<const std::size_t> rows, double alpha, std::vector<double>& grad) {
  const auto off = layer_offsets(net.sizes);
  const std::size_t layers = net.sizes.size() - 1;
  grad.assign(net.params.size(), 0.0);
  std::vector<std::vector<double>> acts;
  std::vector<double> delta, prev_delta;
  double total = 0, wsum = 0;
  for (std::size_t i : rows) {
    if (w[i] == 0) continue;
    const double z = forward(net, off, x.row(i), acts);
    total += w[i] * (softplus(z) - (y[i] == 1 ? z : 0.0));
    wsum += w[i];
    delta.assign(1, w[i] * (sigmoid(z) - (y[i] == 1 ? 1.0 : 0.0)));
    for (std::size_t l = layers; l-- > 0;) {
      const std::size_t in = net.sizes[l], out = net.sizes[l + 1];
      double* gw = grad.data() + off[l];
      double* gb = gw + out * in;
      const double* wt = net.params.data() + off[l];
      const auto& a_in = acts[l];
      for (std::size_t o = 0; o < out; ++o) {
        gb[o] += delta[o];
        for (std::size_t k = 0; k < in; ++k) gw[o * in + k] += delta[o] * a_in[k];
      }
      if (l == 0) break;
      prev_delta.assign(in, 0.0);
      for (std::size_t o = 0; o < out; ++o)
        for (std::size_t k = 0; k < in; ++k) prev_delta[k] += wt[o * in + k] * delta[o];
      for (std::size_t k = 0; k < in; ++k) prev_delta[k] *= activate_grad(a_in[k], net.activation);
      delta.swap(prev_delta);
    }
  }
  if (wsum <= 0) return 0.0;
  for (double& g : grad) g /= wsum;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t n = net.sizes[l] * net.sizes[l + 1];
    for (std::size_t k = 0; k < n; ++k) grad[off[l] + k] += alpha * net.params[off[l] + k] / wsum;
  }
  return total / wsum + 0.5 * alpha * penalty(net, off) / wsum;
}

Network fit_mlp(const Matrix& x, std::span<const int> y, std::span<const double> w, const MlpParams& params) {
  if (params.batch_size == 0 || params.max_epochs == 0) throw Error("mlp: batch size and epochs must be positive");
  Network net = init_network(x.cols(), params.hidden, params.activation, params.seed);
  Rng rng(derive_seed(params.seed, {hash_string("mlp-train")}));

  std::vector<std::size_t> train, valid;
  for (int cls : {0, 1}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] == cls) idx.push_back(i);
    rng.shuffle(std::span<std::size_t>(idx));
    const auto n_valid = static_cast<std::size_t>(std::floor(params.validation_fraction * static_cast<double>(idx.size())));
    valid.insert(valid.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_valid));
    train.insert(train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_valid), idx.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(valid.begin(), valid.end());
  const bool early = !valid.empty();

  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  std::vector<double> m(net.n_params(), 0.0), v(net.n_params(), 0.0), grad;
  double lr = params.learning_rate;
  std::size_t step = 0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_params = net.params;
  std::size_t since_best = 0, since_lr = 0;

  for (std::size_t epoch = 0; epoch < params.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(train));
    double train_loss = 0, train_w = 0;
    for (std::size_t start = 0; start < train.size(); start += params.batch_size) {
      const std::size_t end = std::min(train.size(), start + params.batch_size);
      const std::span<const std::size_t> batch(train.data() + start, end - start);
      double bw = 0;
      for (std::size_t i : batch) bw += w[i];
      if (bw <= 0) continue;
      train_loss += bw * loss_and_gradient(net, x, y, w, batch, params.alpha, grad);
      train_w += bw;
      ++step;
      const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
      for (std::size_t k = 0; k < net.n_params(); ++k) {
        m[k] = b1 * m[k] + (1 - b1) * grad[k];
        v[k] = b2 * v[k] + (1 - b2) * grad[k] * grad[k];
        net.params[k] -= lr * (m[k] / c1) / (std::sqrt(v[k] / c2) + eps);
      }
    }
    const double score = early ? loss(net, x, y, w, valid, params.alpha) : train_loss / std::max(train_w, 1e-300);
    if (!std::isfinite(score)) break;
    if (score < best - params.tol) {
      best = score;
      best_params = net.params;
      since_best = 0;
      since_lr = 0;
    } else {
      ++since_best;
      ++since_lr;
    }
    if (since_best >= params.patience) break;
    if (params.schedule == Schedule::adaptive && since_lr >= 2) {
      lr /= 5.0;
      since_lr = 0;
      if (lr < 1e-6) break;
    }
  }
  net.params = best_params;
  return net;
}

}  // namespace weakpol::mlp
