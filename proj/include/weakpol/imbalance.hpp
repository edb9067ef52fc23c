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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weakpol/kernels.hpp"
#include "weakpol/matrix.hpp"

namespace weakpol {

enum class StrategyKind { none, cost_sensitive, smote_pre_cv, smote_in_cv };
inline constexpr std::array<StrategyKind, 4> kAllStrategies{StrategyKind::none, StrategyKind::cost_sensitive,
                                                            StrategyKind::smote_pre_cv, StrategyKind::smote_in_cv};

std::string_view to_string(StrategyKind kind);
/// Report label ("No sampling", "Cost-sensitive", "SMOTE pre-CV", "SMOTE in-CV").
std::string_view display_name(StrategyKind kind);
/// Accepts full names and the aliases none, cost, pre, in.
std::optional<StrategyKind> parse_strategy(std::string_view name);

inline bool is_smote(StrategyKind kind) {
  return kind == StrategyKind::smote_pre_cv || kind == StrategyKind::smote_in_cv;
}

struct SmoteConfig {
  std::size_t k_neighbors = 5;
  double target_ratio = 1.0;  // minority / majority after oversampling
  std::uint64_t seed = 0;
  /// Every synthetic row uses this lambda instead of a random one (tests).
  std::optional<double> fixed_lambda;
  kernels::Exec exec = kernels::Exec::parallel;

  void validate() const;
};

struct BalancingStrategy {
  StrategyKind kind = StrategyKind::none;
  std::optional<SmoteConfig> smote;

  /// Attaches a default SmoteConfig for the SMOTE variants.
  static BalancingStrategy make(StrategyKind kind, std::uint64_t seed = 0);
  void validate() const;
};

struct ClassWeights {
  double negative = 1.0;
  double positive = 1.0;
  double of(int label) const { return label == 1 ? positive : negative; }
};

/// w_c = N / (2 N_c). Throws Error unless both classes are present.
ClassWeights balanced_class_weights(std::span<const int> y);
std::vector<double> balanced_sample_weights(std::span<const int> y);

struct SmoteProvenance {
  std::size_t synthetic_row = 0;  // row index in the oversampled output
  std::size_t parent_row = 0;     // row indices in the input
  std::size_t neighbor_row = 0;
  double lambda = 0.0;
  bool operator==(const SmoteProvenance&) const = default;
};

struct SmoteResult {
  Matrix x;
  std::vector<int> y;
  std::vector<SmoteProvenance> provenance;
  std::size_t n_original = 0;

  bool is_synthetic(std::size_t row) const { return row >= n_original; }
};

/// Number of synthetic rows needed so that minority / majority reaches
/// `target_ratio`, rounded down; 0 when already met.
std::size_t smote_deficit(std::size_t n_minority, std::size_t n_majority, double target_ratio);

/// Appends synthetic minority rows parent + lambda * (neighbor - parent),
/// where neighbor is one of the parent's k nearest minority rows. Draws come
/// from a counter-based stream keyed by config.seed, so output does not depend
/// on thread count. Returns the input unchanged when the target is already met.
SmoteResult smote_oversample(const Matrix& x, std::span<const int> y, const SmoteConfig& config);

void write_provenance_csv(const std::filesystem::path& path, std::span<const SmoteProvenance> rows);

enum class ApplyContext { whole_train, inner_fold };

struct BalancedData {
  Matrix x;
  std::vector<int> y;
  std::vector<double> weights;
  std::vector<SmoteProvenance> provenance;
  std::size_t n_original = 0;
};

/// none: passthrough with unit weights. cost_sensitive: balanced per-sample
/// weights. SMOTE variants: oversampled rows with unit weights. Throws Error
/// for smote_in_cv outside an inner fold and smote_pre_cv inside one.
BalancedData apply_strategy(const BalancingStrategy& strategy, const Matrix& x, std::span<const int> y,
                            ApplyContext context);

}  // namespace weakpol
