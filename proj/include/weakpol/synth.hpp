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
#include <optional>
#include <string>
#include <vector>

#include "weakpol/corpus.hpp"
#include "weakpol/lexicon.hpp"
#include "weakpol/weaklabel.hpp"

namespace weakpol {

struct SynthConfig {
  std::size_t n_tweets = 10000;
  double positive_fraction = 0.0459;  // of the labeled tweets
  double context_term_rate = 0.0;
  double discordant_rate = 0.0;
  double missing_source_rate = 0.0;
  double uncertain_rate = 0.0;
  double no_drug_rate = 0.0;
  std::size_t filler_vocab_size = 600;
  /// Probability that a filler token comes from the pool shared by both classes.
  double filler_overlap = 0.7;
  std::size_t min_filler = 8;
  std::size_t max_filler = 16;
  std::uint64_t seed = 1;

  /// Throws Error on a fraction outside [0,1], n_tweets < 10 or rates summing above 1.
  void validate() const;
};

/// Term polarities planted in one tweet.
struct PlantedTerms {
  bool has_drug = true;
  std::vector<Polarity> slang;
  std::vector<Polarity> concept_terms;
};

struct Outcome {
  std::optional<int> label;
  std::optional<DiscardReason> reason;
  bool operator==(const Outcome&) const = default;
  /// "1", "0" or the discard reason name.
  std::string to_string() const;
};

struct GroundTruth {
  std::string tweet_id;
  PlantedTerms terms;
  Outcome outcome;
};

struct ConceptAnnotationRow {
  std::string tweet_id;
  std::string concept_id;
  std::string matched_text;
  Polarity polarity = Polarity::positive;
};

struct SynthCorpus {
  SynthConfig config;
  std::vector<TweetRecord> records;
  std::vector<LexiconEntry> slang_lexicon;
  std::vector<LexiconEntry> concept_lexicon;
  std::vector<ConceptAnnotationRow> concept_annotations;
  std::vector<GroundTruth> truth;  // parallel to records

  /// corpus.jsonl, slang_lexicon.csv, concept_lexicon.csv,
  /// concept_annotations.csv and ground_truth.csv.
  void write(const std::filesystem::path& dir) const;
};

/// Planted-term corpus with exact category counts: floor(rate * n) tweets per
/// discard category and round(positive_fraction * labeled) positives.
SynthCorpus generate_corpus(const SynthConfig& config);

/// Expected label or discard reason, by direct enumeration of the planted polarities.
Outcome oracle_label(const PlantedTerms& terms);

}  // namespace weakpol
