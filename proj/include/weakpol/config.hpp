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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "weakpol/evalharness.hpp"
#include "weakpol/pipeline.hpp"
#include "weakpol/synth.hpp"

namespace weakpol {

/// Flat run configuration. Every key is optional in the TOML file; missing
/// keys keep the defaults below. Empty paths mean "not given".
struct RunConfig {
  // inputs and outputs
  std::string corpus;
  std::string labeled;
  std::string slang_lexicon;
  std::string concept_lexicon;
  std::string concept_annotations;
  std::string out_dir = "out";

  std::uint64_t seed = 42;
  int jobs = 1;

  double vote_threshold = 0.6;

  std::size_t embedding_dimension = 30;
  std::size_t embedding_window = 5;
  std::size_t embedding_min_count = 2;
  std::size_t embedding_negatives = 5;
  std::size_t embedding_epochs = 5;
  double embedding_alpha = 0.025;
  double embedding_min_alpha = 0.0001;
  double embedding_sample = 0.001;

  double correlation_threshold = 0.8;

  double test_fraction = 0.2;
  std::size_t outer_folds = 5;
  std::size_t inner_folds = 3;
  std::size_t n_candidates = 20;
  double decision_threshold = 0.5;
  std::size_t smote_k = 5;
  double smote_target_ratio = 1.0;
  std::vector<std::string> algorithms{"dt", "lr", "rf", "bagging", "adaboost", "xgb", "mlp"};
  std::vector<std::string> strategies{"none", "cost_sensitive", "smote_pre_cv", "smote_in_cv"};

  std::size_t synth_n_tweets = 10000;
  double synth_positive_fraction = 0.0459;
  double synth_context_term_rate = 0.1;
  double synth_discordant_rate = 0.05;
  double synth_missing_source_rate = 0.1;
  double synth_uncertain_rate = 0.0;
  double synth_no_drug_rate = 0.0;
  std::size_t synth_filler_vocab_size = 600;
  double synth_filler_overlap = SynthConfig{}.filler_overlap;

  bool operator==(const RunConfig&) const = default;

  /// Throws Error on an out-of-range value or an unknown algorithm/strategy name.
  void validate() const;

  std::vector<Algorithm> algorithm_list() const;
  std::vector<StrategyKind> strategy_list() const;
  EmbeddingConfig embedding_config() const;
  FeaturizeOptions featurize_options() const;
  ExperimentPlan plan() const;
  SynthConfig synth_config() const;

  std::string to_toml() const;
  nlohmann::json to_json() const;
};

/// Throws Error on a syntax error, an unknown key or a wrongly typed value.
RunConfig parse_run_config(std::string_view toml_text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace weakpol
