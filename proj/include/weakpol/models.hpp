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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "weakpol/kernels.hpp"
#include "weakpol/linear.hpp"
#include "weakpol/matrix.hpp"
#include "weakpol/mlp.hpp"
#include "weakpol/rng.hpp"
#include "weakpol/tree.hpp"

namespace weakpol {

enum class Algorithm {
  decision_tree,
  logistic_regression,
  random_forest,
  bagging,
  adaboost,
  gradient_boosted_trees,
  mlp
};
inline constexpr std::array<Algorithm, 7> kAllAlgorithms{
    Algorithm::decision_tree, Algorithm::logistic_regression, Algorithm::random_forest, Algorithm::bagging,
    Algorithm::adaboost,      Algorithm::gradient_boosted_trees, Algorithm::mlp};

std::string_view to_string(Algorithm algorithm);
/// Report label (DT, LR, RF, Bagging, AdaBoost, XGBoost, MLP).
std::string_view display_name(Algorithm algorithm);
/// Accepts full names and the aliases dt, lr, rf, bagging, adaboost, xgb, mlp.
std::optional<Algorithm> parse_algorithm(std::string_view name);

using ParamValue = std::variant<std::int64_t, double, std::string, std::vector<std::int64_t>>;
using Params = std::map<std::string, ParamValue>;

std::string format_param(const ParamValue& value);
nlohmann::json param_to_json(const ParamValue& value);
ParamValue param_from_json(const nlohmann::json& j);

struct ModelSpec {
  Algorithm algorithm = Algorithm::decision_tree;
  Params params;
  std::uint64_t seed = 0;

  std::int64_t get_int(const std::string& name) const;
  double get_real(const std::string& name) const;
  const std::string& get_string(const std::string& name) const;
  const std::vector<std::int64_t>& get_ints(const std::string& name) const;

  /// name=value pairs joined with ';' in key order.
  std::string describe() const;
  nlohmann::json to_json() const;
  static ModelSpec from_json(const nlohmann::json& j);
  bool operator==(const ModelSpec&) const = default;
};

struct ParamDim {
  enum class Kind { integer, real, log_real, choice };
  std::string name;
  Kind kind = Kind::choice;
  double lo = 0;
  double hi = 0;
  std::vector<ParamValue> choices;

  ParamValue sample(Rng& rng) const;
  bool contains(const ParamValue& value) const;
};

struct SearchSpace {
  Algorithm algorithm = Algorithm::decision_tree;
  std::vector<ParamDim> dims;

  Params sample(Rng& rng) const;
  /// Throws Error on a missing, unknown or out-of-range key.
  void validate(const Params& params) const;
};

const SearchSpace& search_space(Algorithm algorithm);

/// n specs drawn from the algorithm's space with one stream seeded by `seed`;
/// each spec's own seed is derived from (seed, position).
std::vector<ModelSpec> sample_specs(Algorithm algorithm, std::size_t n, std::uint64_t seed);

/// A spec in the middle of the search space, for one-off fits.
ModelSpec default_spec(Algorithm algorithm, std::uint64_t seed = 0);

/// Fitted learner; scores lie in [0,1].
class Estimator {
 public:
  virtual ~Estimator() = default;
  virtual double score_row(std::span<const double> x) const = 0;
  virtual nlohmann::json to_json() const = 0;
};

struct TrainingMeta {
  std::size_t rows = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  double wall_seconds = 0.0;
};

class TrainedModel {
 public:
  static constexpr int kFormatVersion = 1;

  TrainedModel(ModelSpec spec, std::shared_ptr<const Estimator> estimator, std::size_t n_features,
               std::string schema_hash, TrainingMeta meta);

  const ModelSpec& spec() const { return spec_; }
  const Estimator& estimator() const { return *estimator_; }
  std::size_t n_features() const { return n_features_; }
  const std::string& schema_hash() const { return schema_hash_; }
  const TrainingMeta& meta() const { return meta_; }

  nlohmann::json to_json() const;
  static TrainedModel from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static TrainedModel load(const std::filesystem::path& path);

 private:
  ModelSpec spec_;
  std::shared_ptr<const Estimator> estimator_;
  std::size_t n_features_ = 0;
  std::string schema_hash_;
  TrainingMeta meta_;
};

struct FitOptions {
  std::string schema_hash;
  kernels::Exec exec = kernels::Exec::parallel;
};

/// Throws Error on size mismatch, a single class, a non-finite feature (row
/// and column named), negative or non-finite weights, or a zero weight sum.
TrainedModel fit(const ModelSpec& spec, const Matrix& x, std::span<const int> y, std::span<const double> weights = {},
                 const FitOptions& options = {});

/// Throws Error when the column count or a non-empty schema hash differs from training.
std::vector<double> predict_proba(const TrainedModel& model, const Matrix& x, std::string_view schema_hash = {});
std::vector<int> predict(const TrainedModel& model, const Matrix& x, double threshold = 0.5,
                         std::string_view schema_hash = {});
/// 1 where score >= threshold.
std::vector<int> apply_threshold(std::span<const double> scores, double threshold);

/// True when fitting `small` on some data yields a prefix of fitting `large`
/// on the same data: boosted trees with equal depth and no more estimators.
bool shares_prefix(const ModelSpec& small, const ModelSpec& large);
/// The model `fit(small, ...)` would return, cut from a fit of a larger spec.
/// Throws Error unless shares_prefix(small, large.spec()).
TrainedModel prefix_model(const TrainedModel& large, const ModelSpec& small);

// ---- concrete learners, exposed for tests ----

namespace models {

class TreeEstimator final : public Estimator {
 public:
  explicit TreeEstimator(tree::Tree t) : tree_(std::move(t)) {}
  double score_row(std::span<const double> x) const override { return tree_.predict(x); }
  nlohmann::json to_json() const override;
  const tree::Tree& tree() const { return tree_; }

 private:
  tree::Tree tree_;
};

/// Bootstrap ensemble of CART trees. Each tree's sample counts are
/// Poisson(rate) draws keyed by (seed, tree index, row content).
class ForestEstimator final : public Estimator {
 public:
  struct Config {
    tree::CartParams cart;
    double sample_rate = 1.0;
    std::uint64_t seed = 0;
  };

  explicit ForestEstimator(Config config) : config_(config) {}

  /// Adds trees until there are `n_trees`.
  void grow(const Matrix& x, std::span<const int> y, std::span<const double> w, std::size_t n_trees,
            kernels::Exec exec = kernels::Exec::parallel);

  double score_row(std::span<const double> x) const override;
  nlohmann::json to_json() const override;
  static std::unique_ptr<ForestEstimator> from_json(const nlohmann::json& j);
  std::size_t size() const { return trees_.size(); }
  const std::vector<tree::Tree>& trees() const { return trees_; }

 private:
  Config config_;
  std::vector<tree::Tree> trees_;
};

/// Discrete binary SAMME over depth-1 trees. Score = sigmoid(sum a_m h_m / sum a_m), h in {-1, +1}.
class AdaBoostEstimator final : public Estimator {
 public:
  static std::unique_ptr<AdaBoostEstimator> train(const Matrix& x, std::span<const int> y, std::span<const double> w,
                                                  std::size_t n_estimators, double learning_rate);
  double score_row(std::span<const double> x) const override;
  nlohmann::json to_json() const override;
  static std::unique_ptr<AdaBoostEstimator> from_json(const nlohmann::json& j);
  std::size_t size() const { return stumps_.size(); }

 private:
  std::vector<tree::Tree> stumps_;
  std::vector<double> alphas_;
};

class BoostedTreesEstimator final : public Estimator {
 public:
  /// `loss_trace`, when given, receives the weighted training log loss before
  /// the first tree and after each added tree.
  static std::unique_ptr<BoostedTreesEstimator> train(const Matrix& x, std::span<const int> y,
                                                      std::span<const double> w, std::size_t n_estimators,
                                                      const tree::BoostParams& params,
                                                      std::vector<double>* loss_trace = nullptr);
  double margin(std::span<const double> x) const;
  double score_row(std::span<const double> x) const override;
  nlohmann::json to_json() const override;
  static std::unique_ptr<BoostedTreesEstimator> from_json(const nlohmann::json& j);
  std::size_t size() const { return trees_.size(); }
  std::unique_ptr<BoostedTreesEstimator> prefix(std::size_t n_trees) const;

 private:
  double base_margin_ = 0.0;
  std::vector<tree::Tree> trees_;
};

class LogisticEstimator final : public Estimator {
 public:
  explicit LogisticEstimator(linear::LrModel m) : model_(std::move(m)) {}
  double score_row(std::span<const double> x) const override { return model_.predict_proba(x); }
  nlohmann::json to_json() const override;
  const linear::LrModel& model() const { return model_; }

 private:
  linear::LrModel model_;
};

class MlpEstimator final : public Estimator {
 public:
  explicit MlpEstimator(mlp::Network net) : net_(std::move(net)) {}
  double score_row(std::span<const double> x) const override { return net_.predict_proba(x); }
  nlohmann::json to_json() const override { return net_.to_json(); }
  const mlp::Network& network() const { return net_; }

 private:
  mlp::Network net_;
};

/// Content hash of a training row used to key bootstrap draws.
std::uint64_t row_key(std::span<const double> x, int y);

}  // namespace models

}  // namespace weakpol
