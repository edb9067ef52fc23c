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

#include "weakpol/pipeline.hpp"

#include <algorithm>

#include "weakpol/common.hpp"

namespace weakpol {

Dataset label_with_terms(std::span<const TweetRecord> records, std::span<const ConsolidatedTerm> slang_terms,
                         std::span<const ConsolidatedTerm> concept_terms) {
  const TermMatcher slang = build_matcher(slang_terms);
  const TermMatcher concepts = build_matcher(concept_terms);
  return build_dataset(records, tag_corpus(records, slang), tag_corpus(records, concepts));
}

Dataset label_with_annotations(std::span<const TweetRecord> records, std::span<const ConsolidatedTerm> slang_terms,
                               const MatchMap& concept_matches) {
  const TermMatcher slang = build_matcher(slang_terms);
  return build_dataset(records, tag_corpus(records, slang), concept_matches);
}

std::vector<LabeledRow> labeled_rows(const Dataset& dataset, std::span<const TweetRecord> records) {
  std::vector<LabeledRow> out;
  out.reserve(dataset.examples.size());
  for (const auto& ex : dataset.examples) {
    if (ex.record_index >= records.size() || records[ex.record_index].id != ex.tweet_id)
      throw Error("labeled example " + ex.tweet_id + " does not match its source record");
    out.push_back({records[ex.record_index], ex.label, ex.slang_verdict.score, ex.concept_verdict.score, ex.drugs});
  }
  return out;
}

PreparedData prepare_experiment(std::span<const LabeledRow> rows, const FeaturizeOptions& options,
                                const SplitPlan& split) {
  split.validate();
  std::vector<int> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) y[i] = rows[i].label;
  PreparedData out;
  out.split = stratified_split(y, split.test_fraction, split.seed);
  const auto tokens = tokenize_rows(rows);
  out.embedding = train_embeddings(tokens, options.embedding);
  RawFeatures raw = raw_features(rows, tokens, out.embedding);
  out.stats = raw.stats;
  const Matrix raw_train = raw.table.x.select_rows(out.split.train);
  out.schema = fit_schema(raw_train, raw.table.names, options.correlation_threshold);
  out.data.x_train = out.schema.apply(raw_train);
  out.data.x_test = out.schema.apply(raw.table.x.select_rows(out.split.test));
  out.data.y_train = gather<int>(y, out.split.train);
  out.data.y_test = gather<int>(y, out.split.test);
  out.data.feature_names = out.schema.retained;
  out.data.schema_hash = out.schema.hash();
  return out;
}

bool LeakageResult::passed() const {
  return pre_gap() >= kLeakageMinPreGap && std::abs(in_gap()) <= kLeakageMaxInGap;
}

nlohmann::json LeakageResult::to_json() const {
  return {{"seed", seed},
          {"smote_pre_cv", {{"cv_f1", cv_f1_pre}, {"test_f1", test_f1_pre}, {"gap", pre_gap()}}},
          {"smote_in_cv", {{"cv_f1", cv_f1_in}, {"test_f1", test_f1_in}, {"gap", in_gap()}}},
          {"min_pre_gap", kLeakageMinPreGap},
          {"max_in_gap", kLeakageMaxInGap},
          {"passed", passed()}};
}

LeakageResult run_leakage(const LeakageConfig& config) {
  SynthConfig sc;
  sc.n_tweets = config.n_tweets;
  sc.positive_fraction = config.positive_fraction;
  sc.filler_overlap = config.filler_overlap;
  sc.seed = derive_seed(config.seed, {hash_string("leakage-corpus")});
  const SynthCorpus corpus = generate_corpus(sc);
  const Dataset ds = label_with_terms(corpus.records, consolidate(corpus.slang_lexicon), consolidate(corpus.concept_lexicon));
  const auto rows = labeled_rows(ds, corpus.records);

  ExperimentPlan plan;
  plan.split.seed = config.seed;
  plan.n_candidates = config.n_candidates;
  plan.algorithms = {Algorithm::gradient_boosted_trees};
  plan.strategies = {StrategyKind::smote_pre_cv, StrategyKind::smote_in_cv};
  FeaturizeOptions fo;
  fo.embedding.seed = derive_seed(config.seed, {hash_string("leakage-embedding")});
  const PreparedData prepared = prepare_experiment(rows, fo, plan.split);

  LeakageResult out;
  out.seed = config.seed;
  out.report = run_experiment(prepared.data, plan);
  out.report.metadata["leakage"] = {{"n_tweets", config.n_tweets},
                                    {"positive_fraction", config.positive_fraction},
                                    {"filler_overlap", config.filler_overlap}};
  const auto& pre = out.report.cell(StrategyKind::smote_pre_cv, Algorithm::gradient_boosted_trees);
  const auto& in = out.report.cell(StrategyKind::smote_in_cv, Algorithm::gradient_boosted_trees);
  out.cv_f1_pre = pre.cv.summary.get_mean("f1");
  out.test_f1_pre = pre.test.metrics.f1;
  out.cv_f1_in = in.cv.summary.get_mean("f1");
  out.test_f1_in = in.test.metrics.f1;
  return out;
}

}  // namespace weakpol
