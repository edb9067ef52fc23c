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
#include <set>

#include "generators.hpp"
#include "weakpol/common.hpp"
#include "weakpol/evalharness.hpp"
#include "weakpol/kernels.hpp"

namespace weakpol {
namespace {

TEST(Metrics, ConfusionFormulas) {
  const auto m = compute_metrics(50, 5, 10, 35);
  EXPECT_DOUBLE_EQ(m.precision, 35.0 / 45);
  EXPECT_DOUBLE_EQ(m.recall, 35.0 / 40);
  EXPECT_DOUBLE_EQ(m.f1, 2.0 * 35 / (2 * 35 + 10 + 5));
  EXPECT_DOUBLE_EQ(m.accuracy, 85.0 / 100);
  EXPECT_TRUE(m.has(kAurocUndefined));
  EXPECT_FALSE(m.has(kF1Undefined));
}

TEST(Metrics, UndefinedFlagged) {
  const auto none_predicted = compute_metrics(10, 3, 0, 0);
  EXPECT_TRUE(none_predicted.has(kPrecisionUndefined));
  EXPECT_EQ(none_predicted.precision, 0.0);
  EXPECT_FALSE(none_predicted.has(kRecallUndefined));
  const auto no_pos = compute_metrics(10, 0, 2, 0);
  EXPECT_TRUE(no_pos.has(kRecallUndefined));
  EXPECT_TRUE(no_pos.has(kF1Undefined));
  EXPECT_THROW(compute_metrics(0, 0, 0, 0), Error);
  const std::vector<int> y{0, 0};
  const std::vector<double> s{0.2, 0.7};
  const auto r = evaluate_scores(y, s);
  EXPECT_TRUE(r.has(kAurocUndefined));
  EXPECT_TRUE(r.has(kAuprcUndefined));
  EXPECT_EQ(r.cm.fp, 1u);
}

TEST(Metrics, RankingInvariantUnderMonotoneTransformProperty) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto y = testing::random_labels(rng, 2 + rng.below(100), 0.3);
    const auto s = testing::random_scores(rng, y.size(), 8);
    std::vector<double> t(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) t[i] = std::exp(3 * s[i]) - 5;
    EXPECT_DOUBLE_EQ(auroc(y, s), auroc(y, t));
    EXPECT_DOUBLE_EQ(auprc(y, s), auprc(y, t));
    std::vector<double> neg(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) neg[i] = -s[i];
    EXPECT_NEAR(auroc(y, s) + auroc(y, neg), 1.0, 1e-12);
  }
}

TEST(Metrics, ThresholdIsInclusive) {
  const std::vector<double> s{0.5, 0.49, 0.51};
  EXPECT_EQ(apply_threshold(s, 0.5), (std::vector<int>{1, 0, 1}));
}

TEST(Summary, PopulationStd) {
  std::vector<MetricReport> r{compute_metrics(5, 1, 1, 3), compute_metrics(5, 3, 1, 1)};
  const auto s = summarize(r);
  EXPECT_DOUBLE_EQ(s.get_mean("recall"), 0.5);
  EXPECT_DOUBLE_EQ(s.get_std("recall"), 0.25);
}

TEST(Split, RejectsBadInput) {
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  EXPECT_THROW(stratified_split(y, 0.0, 1), Error);
  EXPECT_THROW(stratified_kfold(y, 1, 1), Error);
  EXPECT_THROW(stratified_kfold(y, 4, 1), Error);  // fewer rows per class than folds
  EXPECT_EQ(complement(std::vector<std::size_t>{1, 3}, 5), (std::vector<std::size_t>{0, 2, 4}));
}

TEST(Split, FoldSizesDifferByAtMostOneProperty) {
  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 2 + rng.below(6);
    const auto y = testing::random_labels(rng, 30 + rng.below(300), rng.uniform(0.1, 0.5), 8);
    const auto folds = stratified_kfold(y, k, rng.next());
    std::size_t lo = y.size(), hi = 0;
    for (const auto& f : folds) {
      lo = std::min(lo, f.size());
      hi = std::max(hi, f.size());
      EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
    }
    EXPECT_LE(hi - lo, 1u);
  }
}

struct Data {
  Matrix x;
  std::vector<int> y;
};

Data imbalanced(std::uint64_t seed, std::size_t n = 240) {
  Rng rng(seed);
  Data d;
  d.y = testing::random_labels(rng, n, 0.12, 15);
  d.x = testing::blobs(rng, d.y, 3, 1.2);
  return d;
}

TEST(Search, DeterministicAndTiesToEarlier) {
  const auto d = imbalanced(3);
  SearchOptions o;
  o.n_candidates = 4;
  o.seed = 5;
  const auto a = random_search(Algorithm::decision_tree, d.x, d.y, StrategyKind::cost_sensitive, o);
  const auto b = random_search(Algorithm::decision_tree, d.x, d.y, StrategyKind::cost_sensitive, o);
  EXPECT_EQ(a.best, b.best);
  ASSERT_EQ(a.candidates.size(), 4u);
  for (std::size_t i = 0; i < a.candidates.size(); ++i) {
    EXPECT_EQ(a.candidates[i].fold_f1.size(), 3u);
    if (i < a.best_index) EXPECT_LT(a.candidates[i].mean_f1, a.candidates[a.best_index].mean_f1);
    else EXPECT_LE(a.candidates[i].mean_f1, a.candidates[a.best_index].mean_f1);
  }
}

TEST(Search, SharedFitsMatchIndependentFits) {
  const auto d = imbalanced(4);
  SearchOptions o;
  o.n_candidates = 6;
  o.seed = 6;
  const auto r = random_search(Algorithm::gradient_boosted_trees, d.x, d.y, StrategyKind::none, o);
  const auto folds = stratified_kfold(d.y, o.inner_folds, derive_seed(o.seed, {hash_string("inner")}));
  for (const auto& c : r.candidates)
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const auto train = complement(folds[f], d.y.size());
      const auto m = fit(c.spec, d.x.select_rows(train), gather<int>(d.y, train));
      const auto s = predict_proba(m, d.x.select_rows(folds[f]));
      EXPECT_EQ(evaluate_scores(gather<int>(d.y, folds[f]), s).f1, c.fold_f1[f]);
    }
}

TEST(NestedCv, PreCvSyntheticRowsOnlyInTraining) {
  const auto d = imbalanced(5);
  CvOptions o;
  o.outer_folds = 3;
  o.search.n_candidates = 2;
  o.seed = 8;
  const auto pre = nested_cv(d.x, d.y, Algorithm::logistic_regression, StrategyKind::smote_pre_cv, o);
  const auto in = nested_cv(d.x, d.y, Algorithm::logistic_regression, StrategyKind::smote_in_cv, o);
  std::size_t validation = 0;
  for (const auto& f : pre.folds) {
    EXPECT_EQ(f.n_synthetic_validation, 0u);
    EXPECT_GT(f.n_synthetic_train, 0u);
    validation += f.n_validation;
  }
  EXPECT_EQ(validation, d.y.size());
  for (const auto& f : in.folds) {
    EXPECT_EQ(f.n_synthetic_validation, 0u);
    EXPECT_GT(f.n_synthetic_train, 0u);
  }
}

TEST(Experiment, ThreadCountDoesNotChangeResults) {
  const auto d = imbalanced(6, 300);
  ExperimentPlan p;
  p.n_candidates = 2;
  p.split.outer_folds = 3;
  p.split.seed = 3;
  p.algorithms = {Algorithm::decision_tree, Algorithm::logistic_regression};
  p.strategies = {StrategyKind::none, StrategyKind::smote_in_cv};
  kernels::set_num_threads(1);
  const auto a = run_experiment(d.x, d.y, p);
  kernels::set_num_threads(3);
  const auto b = run_experiment(d.x, d.y, p);
  kernels::set_num_threads(1);
  EXPECT_EQ(a.cv_csv(), b.cv_csv());
  EXPECT_EQ(a.test_csv(), b.test_csv());
  ASSERT_EQ(a.cells.size(), 4u);
  EXPECT_EQ(a.cells[0].strategy, StrategyKind::none);
  EXPECT_EQ(a.cells[1].algorithm, Algorithm::logistic_regression);
  EXPECT_EQ(&a.cell(StrategyKind::smote_in_cv, Algorithm::decision_tree), &a.cells[2]);
  EXPECT_EQ(a.n_train + a.n_test, d.y.size());
}

TEST(Experiment, CellSeedsDiffer) {
  std::set<std::uint64_t> seeds;
  for (auto s : kAllStrategies)
    for (auto a : kAllAlgorithms) seeds.insert(cell_seed(42, s, a));
  EXPECT_EQ(seeds.size(), kAllStrategies.size() * kAllAlgorithms.size());
}

}  // namespace
}  // namespace weakpol
