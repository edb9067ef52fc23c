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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "weakpol/common.hpp"
#include "weakpol/text.hpp"

namespace weakpol {

enum class ReferenceKind { original, reply, retweet, quote };

std::string_view to_string(ReferenceKind kind);
std::optional<ReferenceKind> parse_reference_kind(std::string_view name);

struct UserProfile {
  bool verified = false;
  std::int64_t followers = 0;
  std::int64_t following = 0;
  std::int64_t tweet_count = 0;
  std::int64_t listed_count = 0;
  bool location_present = false;

  bool operator==(const UserProfile&) const = default;
};

struct TweetRecord {
  std::string id;
  std::string text;
  std::string created_at;
  std::string author_id;
  std::int64_t like_count = 0;
  std::int64_t retweet_count = 0;
  std::int64_t reply_count = 0;
  std::int64_t quote_count = 0;
  bool has_media = false;
  bool has_mention = false;
  ReferenceKind reference_kind = ReferenceKind::original;
  std::optional<std::string> country_code;
  UserProfile user;

  bool operator==(const TweetRecord&) const = default;
};

struct IngestReport {
  std::size_t lines = 0;
  std::size_t parsed = 0;
  std::size_t duplicates = 0;
  std::size_t unknown_reference_types = 0;
  std::vector<std::size_t> malformed;                       // line numbers
  std::vector<std::pair<std::size_t, std::string>> skipped;  // line number, reason

  nlohmann::json to_json() const;
};

struct IngestResult {
  std::vector<TweetRecord> records;
  IngestReport report;
};

/// Reads tweet-shaped JSONL. Malformed lines and lines lacking id/text are
/// reported and skipped; with `dedupe`, later repeats of an id are dropped.
IngestResult ingest_jsonl(const std::filesystem::path& path, bool dedupe);
IngestResult ingest_jsonl(std::istream& in, bool dedupe);

nlohmann::json to_json(const TweetRecord& record);
void write_jsonl(std::ostream& out, std::span<const TweetRecord> records);

/// Corpus CSV: one flattened TweetRecord per row.
const std::vector<std::string>& corpus_csv_columns();
std::vector<std::string> corpus_csv_fields(const TweetRecord& record);
TweetRecord corpus_record_from_fields(const std::vector<std::string>& header, const std::vector<std::string>& row);
void write_corpus_csv(std::ostream& out, std::span<const TweetRecord> records);
std::vector<TweetRecord> read_corpus_csv(const std::filesystem::path& path);

/// Loads a corpus from `.jsonl`/`.json` or corpus CSV, by extension.
std::vector<TweetRecord> load_corpus(const std::filesystem::path& path);

/// Drops URLs, hashtags and emoji, lowercases, collapses whitespace. Idempotent.
std::string clean_text_stage1(std::string_view text);

bool is_emoji(char32_t cp);

/// Precedence: retweet > quote > reply; empty list means original. Unknown
/// type strings are ignored and counted in `unknown` when given.
ReferenceKind classify_reference(std::span<const std::string> types, std::size_t* unknown = nullptr);

inline constexpr std::array<std::string_view, 11> kUsageTerms{
    "use", "consume", "consuming", "consumed", "consumption", "take",
    "taking", "taken", "using", "high", "drugged"};

struct DrugQuery {
  Drug drug = Drug::ecstasy;
  std::vector<std::string> keywords;  // verbatim keyword list entries
};

/// Parses the `drug,keyword` CSV format.
std::vector<DrugQuery> parse_drug_queries(std::string_view csv_text);
/// The bundled keyword lists (data/drug_keywords.csv).
const std::vector<DrugQuery>& default_drug_queries();
const DrugQuery& default_query(Drug drug);

/// Leftmost-longest keyword index over the keyword lists of all drugs, so a
/// keyword nested inside a longer keyword of any drug never fires on its own.
/// Keywords are normalized with clean_text_stage1 before matching.
class KeywordIndex {
 public:
  explicit KeywordIndex(std::span<const DrugQuery> queries);

  struct Hit {
    Drug drug;
    std::string keyword;
  };
  std::vector<Hit> find(std::string_view cleaned_text) const;
  bool has_usage_term(std::string_view cleaned_text) const;

  static const KeywordIndex& defaults();

 private:
  PhraseMatcher keywords_;
  std::vector<std::vector<Hit>> owners_;  // per pattern
  PhraseMatcher usage_;
};

struct QueryMatch {
  bool matched = false;
  std::vector<std::string> keywords;
};

QueryMatch matches_drug_query(std::string_view cleaned_text, const DrugQuery& query, bool require_usage_term,
                              const KeywordIndex& index = KeywordIndex::defaults());

/// Drugs whose keywords occur in the cleaned text, indexed by Drug.
std::array<bool, 3> drugs_mentioned(std::string_view cleaned_text,
                                    const KeywordIndex& index = KeywordIndex::defaults());

/// Keeps records matching any of `drugs`, in input order.
std::vector<TweetRecord> filter_by_drugs(std::span<const TweetRecord> records, std::span<const Drug> drugs,
                                         bool require_usage_term,
                                         const KeywordIndex& index = KeywordIndex::defaults());

}  // namespace weakpol
