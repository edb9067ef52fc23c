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

#include "weakpol/evalharness.hpp"
#include "weakpol/features.hpp"
#include "weakpol/synth.hpp"
#include "weakpol/weaklabel.hpp"

namespace weakpol {

/// Dictionary tagging for both sources, then the labeling cascade.
Dataset label_with_terms(std::span<const TweetRecord> records, std::span<const ConsolidatedTerm> slang_terms,
                         std::span<const ConsolidatedTerm> concept_terms);

/// Dictionary tagging for slang; concept matches come from offline annotations.
Dataset label_with_annotations(std::span<const TweetRecord> records, std::span<const ConsolidatedTerm> slang_terms,
                               const MatchMap& concept_matches);

/// One LabeledRow per example, in dataset order.
std::vector<LabeledRow> labeled_rows(const Dataset& dataset, std::span<const TweetRecord> records);

struct FeaturizeOptions {
  EmbeddingConfig embedding;
  double correlation_threshold = 0.8;
};

struct PreparedData {
  ExperimentData data;
  TrainTestSplit split;
  FeatureSchema schema;
  EmbeddingModel embedding;
  AssembleStats stats;
};

/// Stratified split of the rows; embeddings are trained on the tokens of all
/// rows (no labels involved), while standardization and correlation pruning
/// are fitted on the training rows only.
PreparedData prepare_experiment(std::span<const LabeledRow> rows, const FeaturizeOptions& options,
                                const SplitPlan& split);

// ---- leakage benchmark ----

inline constexpr double kLeakageMinPreGap = 0.05;  // CV-F1 minus test F1, smote_pre_cv
inline constexpr double kLeakageMaxInGap = 0.05;   // |CV-F1 minus test F1|, smote_in_cv

struct LeakageConfig {
  std::size_t n_tweets = 5000;
  double positive_fraction = 0.05;
  std::size_t n_candidates = 20;
  double filler_overlap = SynthConfig{}.filler_overlap;
  std::uint64_t seed = 7;
};

struct LeakageResult {
  std::uint64_t seed = 0;
  double cv_f1_pre = 0, test_f1_pre = 0, cv_f1_in = 0, test_f1_in = 0;
  ExperimentReport report;

  double pre_gap() const { return cv_f1_pre - test_f1_pre; }
  double in_gap() const { return cv_f1_in - test_f1_in; }
  bool passed() const;
  nlohmann::json to_json() const;
};

/// Synthetic corpus, full labeling and feature pipeline, then the
/// gradient-boosted-trees cells for smote_pre_cv and smote_in_cv.
LeakageResult run_leakage(const LeakageConfig& config);

}  // namespace weakpol
