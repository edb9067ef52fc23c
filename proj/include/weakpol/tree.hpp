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
#include "weakpol/rng.hpp"

namespace weakpol::tree {

/// Column-major bin codes over quantile cut points. A value x falls in bin b
/// when cuts[b-1] <= x < cuts[b]; at most 256 bins per feature.
class BinnedMatrix {
 public:
  static BinnedMatrix build(const Matrix& x, std::size_t max_bins = 256);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cuts_.size(); }
  std::uint8_t bin(std::size_t i, std::size_t f) const { return bins_[f * rows_ + i]; }
  const std::uint8_t* column(std::size_t f) const { return bins_.data() + f * rows_; }
  const std::vector<double>& cuts(std::size_t f) const { return cuts_[f]; }
  std::size_t n_bins(std::size_t f) const { return cuts_[f].size() + 1; }
  /// First slot of feature f in a histogram laid out over all features.
  std::size_t offset(std::size_t f) const { return offsets_[f]; }
  std::size_t total_bins() const { return offsets_.empty() ? 0 : offsets_.back(); }
  /// Row-major histogram slots (offset(f) + bin) of row i, one per feature.
  const std::uint32_t* row_slots(std::size_t i) const { return slots_.data() + i * cols(); }

 private:
  std::size_t rows_ = 0;
  std::vector<std::vector<double>> cuts_;
  std::vector<std::uint8_t> bins_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> slots_;
};

/// Binary tree stored as parallel node arrays; feature -1 marks a leaf.
struct Tree {
  std::vector<int> feature;
  std::vector<double> threshold;
  std::vector<int> left;
  std::vector<int> right;
  std::vector<double> value;

  std::size_t size() const { return feature.size(); }
  bool is_leaf(std::size_t node) const { return feature[node] < 0; }
  std::size_t leaf_index(std::span<const double> x) const;
  double predict(std::span<const double> x) const { return value[leaf_index(x)]; }
  std::size_t depth() const;

  nlohmann::json to_json() const;
  static Tree from_json(const nlohmann::json& j);
  bool operator==(const Tree&) const = default;

  int add_leaf(double v);
};

enum class Criterion { gini, entropy };
enum class MaxFeatures { all, sqrt, log2 };

std::size_t resolve_max_features(MaxFeatures mode, std::size_t n_features);

struct CartParams {
  Criterion criterion = Criterion::gini;
  int max_depth = 0;  // 0 = unlimited
  MaxFeatures max_features = MaxFeatures::all;
  std::size_t min_samples_split = 2;
};

/// Classification tree on effective row weights (rows with zero weight are
/// left out). Leaves hold the weighted share of class 1. Impure nodes split
/// even at zero gain; ties go to the lowest feature, then the lowest cut.
Tree grow_cart(const BinnedMatrix& x, std::span<const int> y, std::span<const double> w, const CartParams& params,
               Rng& rng);

struct BoostParams {
  int max_depth = 6;
  double lambda = 1.0;
  double min_child_weight = 1.0;
  double eta = 0.3;
};

/// Second-order regression tree: leaf value -eta * G / (H + lambda). Splits
/// need positive gain and hessian mass >= min_child_weight on both sides.
/// When `row_values` is given it receives the leaf value of every training row.
Tree grow_boost_tree(const BinnedMatrix& x, std::span<const double> g, std::span<const double> h,
                     const BoostParams& params, std::vector<double>* row_values = nullptr);

}  // namespace weakpol::tree
