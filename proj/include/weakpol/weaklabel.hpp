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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "weakpol/corpus.hpp"
#include "weakpol/lexicon.hpp"

namespace weakpol {

struct SourceVerdict {
  Source source = Source::slang;
  long long score = 0;
  Polarity verdict = Polarity::context;  // sign of score

  bool operator==(const SourceVerdict&) const = default;
};

/// Sums +1/-1/0 over the matches of one source. Throws Error on an empty
/// list, mixed sources, or an uncertain match.
SourceVerdict score_tweet(std::span<const TermMatch> matches);

enum class DiscardReason { no_drug, uncertain, missing_source, context, discordant };
inline constexpr std::array<DiscardReason, 5> kAllDiscardReasons{
    DiscardReason::no_drug, DiscardReason::uncertain, DiscardReason::missing_source, DiscardReason::context,
    DiscardReason::discordant};
std::string_view to_string(DiscardReason reason);

struct Consensus {
  std::optional<int> label;  // 1 positive, 0 negative
  std::optional<DiscardReason> reason;
};

/// Missing-source takes precedence over context, context over discordant.
Consensus consensus_label(const std::optional<SourceVerdict>& slang_verdict,
                          const std::optional<SourceVerdict>& concept_verdict);

using MatchMap = std::map<std::string, std::vector<TermMatch>>;

/// Slang (or concept) matches for every record with at least one hit, keyed by id.
MatchMap tag_corpus(std::span<const TweetRecord> records, const TermMatcher& matcher);

struct LabeledExample {
  std::string tweet_id;
  int label = 0;
  SourceVerdict slang_verdict;
  SourceVerdict concept_verdict;
  std::array<bool, 3> drugs{};  // indexed by Drug
  std::size_t record_index = 0;
};

struct DrugBalance {
  std::size_t labeled = 0;
  std::size_t positive = 0;

  bool operator==(const DrugBalance&) const = default;
};

/// Tweet counts at each stage of the exclusion cascade.
struct FunnelReport {
  std::size_t input = 0;
  std::size_t with_drug = 0;
  std::size_t without_uncertain = 0;
  std::size_t with_both_sources = 0;
  std::size_t without_context = 0;
  std::size_t labeled = 0;
  std::size_t positive = 0;
  std::map<DiscardReason, std::size_t> discards;
  std::array<DrugBalance, 3> per_drug{};
  std::vector<std::string> unknown_match_ids;

  void merge(const FunnelReport& other);
  std::array<std::size_t, 6> stages() const;
  nlohmann::json to_json() const;
  bool operator==(const FunnelReport&) const = default;
};

struct DiscardedTweet {
  std::string tweet_id;
  DiscardReason reason = DiscardReason::no_drug;
  std::size_t record_index = 0;
};

struct Dataset {
  std::vector<LabeledExample> examples;
  std::vector<DiscardedTweet> discarded;  // in record order
  FunnelReport funnel;
};

/// Cascade: no drug mention, any uncertain term, then per-source verdicts and
/// the consensus filter. Ids in the match maps absent from `records` are
/// reported in the funnel and skipped.
Dataset build_dataset(std::span<const TweetRecord> records, const MatchMap& slang_matches, const MatchMap& concept_matches,
                      const KeywordIndex& index = KeywordIndex::defaults());

/// Labeled dataset CSV: tweet_id,label,slang_score,concept_score,mentions_* then
/// the corpus columns of the source record (its id column omitted).
void write_labeled_csv(std::ostream& out, const Dataset& dataset, std::span<const TweetRecord> records);

struct LabeledRow {
  TweetRecord record;
  int label = 0;
  long long slang_score = 0;
  long long concept_score = 0;
  std::array<bool, 3> drugs{};
};

std::vector<LabeledRow> parse_labeled_csv(std::string_view text);
std::vector<LabeledRow> read_labeled_csv(const std::filesystem::path& path);

}  // namespace weakpol
