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

#include "weakpol/imbalance.hpp"

#include <algorithm>
#include <cmath>

#include "weakpol/common.hpp"
#include "weakpol/csv.hpp"
#include "weakpol/rng.hpp"
#include "weakpol/text.hpp"

namespace weakpol {

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::none: return "none";
    case StrategyKind::cost_sensitive: return "cost_sensitive";
    case StrategyKind::smote_pre_cv: return "smote_pre_cv";
    case StrategyKind::smote_in_cv: return "smote_in_cv";
  }
  return "?";
}

std::string_view display_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::none: return "No sampling";
    case StrategyKind::cost_sensitive: return "Cost-sensitive";
    case StrategyKind::smote_pre_cv: return "SMOTE pre-CV";
    case StrategyKind::smote_in_cv: return "SMOTE in-CV";
  }
  return "?";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) {
  const std::string s = ascii_lower(name);
  if (s == "none" || s == "no_sampling") return StrategyKind::none;
  if (s == "cost_sensitive" || s == "cost") return StrategyKind::cost_sensitive;
  if (s == "smote_pre_cv" || s == "pre") return StrategyKind::smote_pre_cv;
  if (s == "smote_in_cv" || s == "in") return StrategyKind::smote_in_cv;
  return std::nullopt;
}

void SmoteConfig::validate() const {
  if (k_neighbors < 1) throw Error("smote: k_neighbors must be at least 1");
  if (!(target_ratio > 0.0 && target_ratio <= 1.0)) throw Error("smote: target_ratio must lie in (0, 1]");
  if (fixed_lambda && !(*fixed_lambda >= 0.0 && *fixed_lambda <= 1.0))
    throw Error("smote: fixed lambda must lie in [0, 1]");
}

BalancingStrategy BalancingStrategy::make(StrategyKind kind, std::uint64_t seed) {
  BalancingStrategy s{kind, std::nullopt};
  if (is_smote(kind)) {
    s.smote = SmoteConfig{};
    s.smote->seed = seed;
  }
  return s;
}

void BalancingStrategy::validate() const {
  if (is_smote(kind) != smote.has_value())
    throw Error(std::string("strategy ") + std::string(to_string(kind)) +
                (smote ? " does not take" : " requires") + " a SMOTE configuration");
  if (smote) smote->validate();
}

ClassWeights balanced_class_weights(std::span<const int> y) {
  std::size_t pos = 0, neg = 0;
  for (int v : y) {
    if (v == 1) ++pos;
    else if (v == 0) ++neg;
    else throw Error("class weights: labels must be 0 or 1");
  }
  if (pos == 0 || neg == 0) throw Error("class weights: both classes must be present");
  const double n = static_cast<double>(y.size());
  return {n / (2.0 * static_cast<double>(neg)), n / (2.0 * static_cast<double>(pos))};
}

std::vector<double> balanced_sample_weights(std::span<const int> y) {
  const ClassWeights cw = balanced_class_weights(y);
  std::vector<double> w(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) w[i] = cw.of(y[i]);
  return w;
}

std::size_t smote_deficit(std::size_t n_minority, std::size_t n_majority, double target_ratio) {
  const auto want = static_cast<std::size_t>(std::floor(target_ratio * static_cast<double>(n_majority)));
  return want > n_minority ? want - n_minority : 0;
}

SmoteResult smote_oversample(const Matrix& x, std::span<const int> y, const SmoteConfig& config) {
  config.validate();
  if (y.size() != x.rows()) throw Error("smote: row and label counts differ");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 1) pos.push_back(i);
    else if (y[i] == 0) neg.push_back(i);
    else throw Error("smote: labels must be 0 or 1");
  }
  const bool pos_minor = pos.size() <= neg.size();
  const auto& minority = pos_minor ? pos : neg;
  const auto& majority = pos_minor ? neg : pos;
  const int minority_label = pos_minor ? 1 : 0;

  SmoteResult out;
  out.x = x;
  out.y.assign(y.begin(), y.end());
  out.n_original = x.rows();
  const std::size_t need = smote_deficit(minority.size(), majority.size(), config.target_ratio);
  if (need == 0) return out;
  if (minority.size() < 2 || minority.size() <= config.k_neighbors)
    throw Error("smote: " + std::to_string(minority.size()) + " minority rows cannot support k_neighbors=" +
                std::to_string(config.k_neighbors) + "; use a smaller k");

  const Matrix points = x.select_rows(minority);
  const kernels::Neighbors nn = config.exec == kernels::Exec::serial ? kernels::knn_serial(points, config.k_neighbors)
                                                                      : kernels::knn_parallel(points, config.k_neighbors);
  const std::uint64_t key = derive_seed(config.seed, {hash_string("smote")});
  const std::size_t m = minority.size(), k = config.k_neighbors, f = x.cols();
  out.x.reserve_rows(x.rows() + need);
  out.provenance.reserve(need);
  std::vector<double> row(f);
  for (std::size_t s = 0; s < need; ++s) {
    const auto p = std::min(m - 1, static_cast<std::size_t>(counter_uniform(key, 3 * s) * static_cast<double>(m)));
    const auto q = std::min(k - 1, static_cast<std::size_t>(counter_uniform(key, 3 * s + 1) * static_cast<double>(k)));
    const double lambda = config.fixed_lambda ? *config.fixed_lambda : counter_uniform(key, 3 * s + 2);
    const std::size_t parent = minority[p], neighbor = minority[nn[p][q]];
    const auto a = x.row(parent), b = x.row(neighbor);
    for (std::size_t j = 0; j < f; ++j) row[j] = a[j] + lambda * (b[j] - a[j]);
    out.provenance.push_back({out.x.rows(), parent, neighbor, lambda});
    out.x.append_row(row);
    out.y.push_back(minority_label);
  }
  return out;
}

void write_provenance_csv(const std::filesystem::path& path, std::span<const SmoteProvenance> rows) {
  std::string s = "synthetic_row,parent_row,neighbor_row,lambda\n";
  for (const auto& r : rows)
    s += std::to_string(r.synthetic_row) + "," + std::to_string(r.parent_row) + "," + std::to_string(r.neighbor_row) +
         "," + format_exact(r.lambda) + "\n";
  write_text_file(path, s);
}

BalancedData apply_strategy(const BalancingStrategy& strategy, const Matrix& x, std::span<const int> y,
                            ApplyContext context) {
  strategy.validate();
  if (strategy.kind == StrategyKind::smote_in_cv && context != ApplyContext::inner_fold)
    throw Error("smote_in_cv may only be applied to the training part of a fold");
  if (strategy.kind == StrategyKind::smote_pre_cv && context != ApplyContext::whole_train)
    throw Error("smote_pre_cv may only be applied to the whole training split");
  BalancedData out;
  switch (strategy.kind) {
    case StrategyKind::none:
    case StrategyKind::cost_sensitive:
      out.x = x;
      out.y.assign(y.begin(), y.end());
      out.n_original = x.rows();
      out.weights = strategy.kind == StrategyKind::none ? std::vector<double>(y.size(), 1.0) : balanced_sample_weights(y);
      break;
    case StrategyKind::smote_pre_cv:
    case StrategyKind::smote_in_cv: {
      SmoteResult r = smote_oversample(x, y, *strategy.smote);
      out.x = std::move(r.x);
      out.y = std::move(r.y);
      out.provenance = std::move(r.provenance);
      out.n_original = r.n_original;
      out.weights.assign(out.y.size(), 1.0);
      break;
    }
  }
  return out;
}

}  // namespace weakpol
