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
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "weakpol/imbalance.hpp"
#include "weakpol/kernels.hpp"
#include "weakpol/matrix.hpp"
#include "weakpol/models.hpp"

namespace weakpol {

// ---- metrics ----

struct Confusion {
  std::size_t tn = 0, fn = 0, fp = 0, tp = 0;
  std::size_t total() const { return tn + fn + fp + tp; }
  bool operator==(const Confusion&) const = default;
};

/// Throws Error on a length mismatch or a non-binary label.
Confusion confusion(std::span<const int> y_true, std::span<const int> y_pred);

enum MetricFlag : unsigned {
  kPrecisionUndefined = 1u << 0,
  kRecallUndefined = 1u << 1,
  kF1Undefined = 1u << 2,
  kAurocUndefined = 1u << 3,
  kAuprcUndefined = 1u << 4,
};

struct MetricReport {
  Confusion cm;
  double precision = 0, recall = 0, f1 = 0, accuracy = 0, auroc = 0, auprc = 0;
  unsigned undefined = 0;  // MetricFlag bits; undefined values are reported as 0

  bool has(MetricFlag flag) const { return (undefined & flag) != 0; }
  std::vector<std::string> undefined_names() const;
  nlohmann::json to_json() const;
};

/// Threshold metrics from confusion cells; auroc/auprc are left flagged
/// undefined. Throws Error when all cells are zero.
MetricReport compute_metrics(std::size_t tn, std::size_t fn, std::size_t fp, std::size_t tp);

/// Mann-Whitney form: P(s+ > s-) + P(tie)/2. Throws Error unless both classes are present.
double auroc(std::span<const int> y_true, std::span<const double> scores);
/// Average precision over descending unique thresholds, tied scores grouped.
/// Throws Error without positives.
double auprc(std::span<const int> y_true, std::span<const double> scores);

/// Full report at `threshold`; ranking metrics are flagged undefined when a class is missing.
MetricReport evaluate_scores(std::span<const int> y_true, std::span<const double> scores, double threshold = 0.5);

// ---- splitting ----

struct SplitPlan {
  double test_fraction = 0.2;
  std::size_t outer_folds = 5;
  std::size_t inner_folds = 3;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainTestSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per-class test counts floor(n_c f) topped up by largest remainder to
/// round(N f), then kept within [1, n_c - 1]. Index lists are sorted.
TrainTestSplit stratified_split(std::span<const int> y, double test_fraction, std::uint64_t seed);

/// k disjoint sorted folds covering every index. Each class is shuffled and
/// dealt round-robin, continuing across classes so fold sizes differ by at most one.
std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> y, std::size_t k, std::uint64_t seed);

/// Complement of `fold` in [0, n).
std::vector<std::size_t> complement(std::span<const std::size_t> fold, std::size_t n);

// ---- search and cross-validation ----

struct SearchOptions {
  std::size_t inner_folds = 3;
  std::size_t n_candidates = 20;
  double threshold = 0.5;
  std::uint64_t seed = 0;
  std::size_t smote_k = 5;
  double smote_target_ratio = 1.0;
};

struct CandidateScore {
  ModelSpec spec;
  std::vector<double> fold_f1;
  double mean_f1 = 0;
};

struct SearchResult {
  ModelSpec best;
  std::size_t best_index = 0;
  std::vector<CandidateScore> candidates;
};

/// Random search by inner stratified k-fold mean F1. smote_pre_cv oversamples
/// the given rows once before folding the originals, and every synthetic row
/// joins every inner training part; smote_in_cv oversamples each inner
/// training part. Ties go to the earlier candidate.
SearchResult random_search(Algorithm algorithm, const Matrix& x, std::span<const int> y, StrategyKind strategy,
                           const SearchOptions& options);

inline constexpr std::array<const char*, 6> kMetricNames{"precision", "recall", "f1", "accuracy", "auroc", "auprc"};

struct MetricSummary {
  std::array<double, 6> mean{};
  std::array<double, 6> std{};  // population convention
  double get_mean(std::string_view metric) const;
  double get_std(std::string_view metric) const;
};

std::array<double, 6> metric_values(const MetricReport& m);
MetricSummary summarize(std::span<const MetricReport> reports);

struct FoldResult {
  MetricReport metrics;
  ModelSpec chosen;
  double search_f1 = 0;
  std::size_t n_train = 0;
  std::size_t n_validation = 0;
  std::size_t n_synthetic_train = 0;
  std::size_t n_synthetic_validation = 0;
};

struct CVResult {
  StrategyKind strategy = StrategyKind::none;
  Algorithm algorithm = Algorithm::decision_tree;
  std::vector<FoldResult> folds;
  MetricSummary summary;
};

struct CvOptions {
  std::size_t outer_folds = 5;
  SearchOptions search;
  std::uint64_t seed = 0;
};

/// Nested cross-validation on training rows. smote_pre_cv oversamples all
/// rows once and folds the originals only; the synthetic rows, including
/// those interpolated from validation rows, go to every training part.
/// Validation folds never hold synthetic rows.
CVResult nested_cv(const Matrix& x, std::span<const int> y, Algorithm algorithm, StrategyKind strategy,
                   const CvOptions& options);

// ---- experiment grid ----

struct ExperimentPlan {
  SplitPlan split;
  std::size_t n_candidates = 20;
  double threshold = 0.5;
  std::size_t smote_k = 5;
  double smote_target_ratio = 1.0;
  std::vector<Algorithm> algorithms{kAllAlgorithms.begin(), kAllAlgorithms.end()};
  std::vector<StrategyKind> strategies{kAllStrategies.begin(), kAllStrategies.end()};

  void validate() const;
  nlohmann::json to_json() const;
};

struct ExperimentData {
  Matrix x_train;
  std::vector<int> y_train;
  Matrix x_test;
  std::vector<int> y_test;
  std::vector<std::string> feature_names;
  std::string schema_hash;
};

struct TestResult {
  MetricReport metrics;
  ModelSpec chosen;
  double search_f1 = 0;
  std::size_t n_train = 0;
};

struct CellResult {
  StrategyKind strategy = StrategyKind::none;
  Algorithm algorithm = Algorithm::decision_tree;
  std::uint64_t seed = 0;
  CVResult cv;
  TestResult test;
};

struct ExperimentReport {
  ExperimentPlan plan;
  std::size_t n_train = 0, n_test = 0, train_positives = 0, test_positives = 0;
  std::string schema_hash;
  std::vector<CellResult> cells;  // strategy-major, in plan order
  nlohmann::json metadata = nlohmann::json::object();

  const CellResult& cell(StrategyKind strategy, Algorithm algorithm) const;

  /// One row per cell; CV mean/std and test metrics with six decimals.
  std::string cv_csv() const;
  std::string test_csv() const;
  nlohmann::json to_json() const;
  std::string text_table() const;
  /// Writes cv_results.csv, test_results.csv, report.json and report.txt.
  void write(const std::filesystem::path& dir) const;
};

/// Seed of one grid cell, derived from (master, strategy, algorithm).
std::uint64_t cell_seed(std::uint64_t master, StrategyKind strategy, Algorithm algorithm);

/// Runs nested CV on the training rows and a final search, fit and test
/// evaluation for every (strategy, algorithm) cell. Cells run in parallel
/// over the configured thread count; results do not depend on it.
ExperimentReport run_experiment(const ExperimentData& data, const ExperimentPlan& plan);

/// Splits (x, y) with plan.split and runs the grid on the two parts as given.
ExperimentReport run_experiment(const Matrix& x, std::span<const int> y, const ExperimentPlan& plan);

}  // namespace weakpol
