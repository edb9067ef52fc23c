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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weakpol/common.hpp"
#include "weakpol/text.hpp"

namespace weakpol {

struct AnnotatorVote {
  std::string annotator;
  Polarity vote = Polarity::context;  // positive, negative or context
};

struct LexiconEntry {
  std::string term;
  std::optional<Drug> drug;
  Source source = Source::slang;
  std::vector<AnnotatorVote> votes;
};

struct ConsolidatedTerm {
  std::string term;
  Source source = Source::slang;
  Polarity polarity = Polarity::uncertain;
  std::optional<Drug> drug;

  bool operator==(const ConsolidatedTerm&) const = default;
};

/// Share of annotators a label needs, held in parts per million and compared
/// exactly. Values must lie in (0.5, 1].
class VoteThreshold {
 public:
  explicit VoteThreshold(double fraction = 0.6);

  bool reached(std::size_t count, std::size_t total) const {
    return static_cast<unsigned long long>(count) * kScale >= parts_ * static_cast<unsigned long long>(total);
  }
  double value() const { return static_cast<double>(parts_) / kScale; }

 private:
  static constexpr unsigned long long kScale = 1'000'000;
  unsigned long long parts_;
};

/// The label whose vote share reaches the threshold, else uncertain.
/// Throws Error on an empty list or a vote that is not positive/negative/context.
Polarity consolidate_votes(std::span<const Polarity> votes, VoteThreshold threshold = VoteThreshold{});

/// Validates entries (lowercase non-empty term, distinct annotators, at least
/// one vote) and consolidates each one.
std::vector<ConsolidatedTerm> consolidate(std::span<const LexiconEntry> entries, VoteThreshold threshold = VoteThreshold{});

struct TermMatch {
  std::string term;
  Source source = Source::slang;
  Polarity polarity = Polarity::uncertain;
  std::size_t begin = 0;  // byte offsets into the cleaned text
  std::size_t end = 0;

  bool operator==(const TermMatch&) const = default;
};

/// Immutable word-boundary, leftmost-longest matcher over the terms of one source.
class TermMatcher {
 public:
  Source source() const { return source_; }
  std::size_t size() const { return terms_.size(); }
  const ConsolidatedTerm& term(std::size_t i) const { return terms_[i]; }

  std::vector<TermMatch> find(std::string_view cleaned_text) const;

 private:
  friend TermMatcher build_matcher(std::span<const ConsolidatedTerm> entries);
  Source source_ = Source::slang;
  std::vector<ConsolidatedTerm> terms_;
  PhraseMatcher phrases_;
};

/// Throws Error when `entries` is empty, mixes sources, or repeats a term.
TermMatcher build_matcher(std::span<const ConsolidatedTerm> entries);

/// Non-overlapping matches sorted by start offset.
inline std::vector<TermMatch> find_terms(std::string_view cleaned_text, const TermMatcher& matcher) {
  return matcher.find(cleaned_text);
}

/// Raw lexicon CSV: term,drug,source,vote_1,vote_2,vote_3 (any number of vote_* columns).
std::vector<LexiconEntry> parse_lexicon_csv(std::string_view text);
/// Consolidated lexicon CSV: term,source,polarity[,drug].
std::vector<ConsolidatedTerm> parse_consolidated_csv(std::string_view text);
void write_lexicon_csv(std::ostream& out, std::span<const LexiconEntry> entries);
void write_consolidated_csv(std::ostream& out, std::span<const ConsolidatedTerm> terms);

/// Loads either lexicon format (detected from the header) and consolidates raw votes.
std::vector<ConsolidatedTerm> load_terms(const std::filesystem::path& path, VoteThreshold threshold = VoteThreshold{});

struct ConceptAnnotationSet {
  std::map<std::string, std::vector<TermMatch>> by_tweet;
  std::size_t rows = 0;
  std::vector<std::pair<std::size_t, std::string>> rejected;  // line number, reason
  std::vector<std::string> warnings;
};

/// Concept annotations produced offline: tweet_id,concept_id,matched_text,polarity.
ConceptAnnotationSet parse_concept_annotations(std::string_view text);
ConceptAnnotationSet load_concept_annotations(const std::filesystem::path& path);

/// True when the CSV header names the concept-annotation columns.
bool is_concept_annotation_csv(std::string_view text);

}  // namespace weakpol
