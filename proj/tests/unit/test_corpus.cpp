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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "weakpol/common.hpp"
#include "weakpol/corpus.hpp"

namespace weakpol {
namespace {

TEST(Ingest, SkipsMalformedAndMissingFields) {
  std::istringstream in(
      "{\"id\":\"1\",\"text\":\"hello\"}\n"
      "not json\n"
      "{\"id\":\"2\"}\n"
      "\n"
      "{\"id\":3,\"text\":\"numeric id\",\"referenced_tweets\":[{\"type\":\"replied_to\"},{\"type\":\"bogus\"}]}\n");
  const auto r = ingest_jsonl(in, false);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[1].id, "3");
  EXPECT_EQ(r.records[1].reference_kind, ReferenceKind::reply);
  EXPECT_EQ(r.report.malformed, std::vector<std::size_t>{2});
  ASSERT_EQ(r.report.skipped.size(), 1u);
  EXPECT_EQ(r.report.skipped[0].first, 3u);
  EXPECT_EQ(r.report.unknown_reference_types, 1u);
}

TEST(Ingest, DedupeKeepsFirst) {
  std::istringstream in("{\"id\":\"1\",\"text\":\"a\"}\n{\"id\":\"1\",\"text\":\"b\"}\n");
  const auto r = ingest_jsonl(in, true);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].text, "a");
  EXPECT_EQ(r.report.duplicates, 1u);
}

TEST(Ingest, MissingFileIsIoError) { EXPECT_THROW(ingest_jsonl("/nonexistent/weakpol.jsonl", false), IoError); }

TweetRecord random_record(Rng& rng, int i) {
  TweetRecord r;
  r.id = "t" + std::to_string(i);
  r.text = "some \"text\", with molly " + testing::random_word(rng, 5);
  r.created_at = "2022-03-0" + std::to_string(1 + i % 9) + "T10:00:00.000Z";
  r.author_id = std::to_string(rng.below(1000));
  r.like_count = static_cast<std::int64_t>(rng.below(50));
  r.retweet_count = static_cast<std::int64_t>(rng.below(50));
  r.reply_count = static_cast<std::int64_t>(rng.below(5));
  r.quote_count = static_cast<std::int64_t>(rng.below(5));
  r.has_media = rng.bernoulli(0.5);
  r.has_mention = rng.bernoulli(0.5);
  r.reference_kind = static_cast<ReferenceKind>(rng.below(4));
  if (rng.bernoulli(0.3)) r.country_code = "NL";
  r.user.verified = rng.bernoulli(0.1);
  r.user.followers = static_cast<std::int64_t>(rng.below(10000));
  r.user.following = static_cast<std::int64_t>(rng.below(1000));
  r.user.tweet_count = static_cast<std::int64_t>(rng.below(100000));
  r.user.listed_count = static_cast<std::int64_t>(rng.below(10));
  r.user.location_present = rng.bernoulli(0.5);
  return r;
}

TEST(Corpus, JsonlAndCsvRoundTrip) {
  Rng rng(12);
  std::vector<TweetRecord> records;
  for (int i = 0; i < 60; ++i) records.push_back(random_record(rng, i));

  std::stringstream jsonl;
  write_jsonl(jsonl, records);
  EXPECT_EQ(ingest_jsonl(jsonl, false).records, records);

  const auto path = std::filesystem::temp_directory_path() / "weakpol_corpus_roundtrip.csv";
  {
    std::ofstream out(path);
    write_corpus_csv(out, records);
  }
  EXPECT_EQ(load_corpus(path), records);
  std::filesystem::remove(path);
}

TEST(Reference, Precedence) {
  std::size_t unknown = 0;
  const std::vector<std::string> all{"replied_to", "quoted", "retweeted", "other"};
  EXPECT_EQ(classify_reference(all, &unknown), ReferenceKind::retweet);
  EXPECT_EQ(unknown, 1u);
  const std::vector<std::string> rq{"replied_to", "quoted"};
  EXPECT_EQ(classify_reference(rq), ReferenceKind::quote);
  EXPECT_EQ(classify_reference({}), ReferenceKind::original);
}

TEST(CleanText, DropsUrlsHashtagsEmoji) {
  EXPECT_EQ(clean_text_stage1("Took MOLLY https://t.co/x #party \xf0\x9f\x98\x80  last   night"),
            "took molly last night");
}

TEST(CleanText, IdempotentProperty) {
  Rng rng(44);
  const std::vector<std::string> parts{"#tag", "http://a.b/c", "Word", "\xf0\x9f\x8e\x89", "  ", "x-y", "MDMA", "caf\xc3\xa9"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    for (std::size_t k = rng.below(10); k > 0; --k) s += parts[rng.below(parts.size())] + (rng.bernoulli(0.7) ? " " : "");
    const std::string once = clean_text_stage1(s);
    EXPECT_EQ(clean_text_stage1(once), once) << s;
  }
}

TEST(Keywords, NestedKeywordBelongsToLongerOwner) {
  const auto hits = KeywordIndex::defaults().find("drinking liquid ecstasy");
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].drug, Drug::ghb);
  const auto mentioned = drugs_mentioned("drinking liquid ecstasy");
  EXPECT_FALSE(mentioned[static_cast<int>(Drug::ecstasy)]);
  EXPECT_TRUE(mentioned[static_cast<int>(Drug::ghb)]);
}

TEST(Keywords, UsageTermRequirement) {
  const auto& q = default_query(Drug::ecstasy);
  EXPECT_TRUE(matches_drug_query("molly tonight", q, false).matched);
  EXPECT_FALSE(matches_drug_query("molly tonight", q, true).matched);
  EXPECT_TRUE(matches_drug_query("taking molly tonight", q, true).matched);
  EXPECT_FALSE(matches_drug_query("mollyx", q, false).matched);
}

TEST(Keywords, FilterKeepsOrder) {
  std::vector<TweetRecord> rs(4);
  const char* texts[] = {"2cb tonight", "nothing", "ghb party", "molly"};
  for (int i = 0; i < 4; ++i) {
    rs[i].id = std::to_string(i);
    rs[i].text = texts[i];
  }
  const std::vector<Drug> drugs{Drug::twocb, Drug::ecstasy};
  const auto kept = filter_by_drugs(rs, drugs, false);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].id, "0");
  EXPECT_EQ(kept[1].id, "3");
}

TEST(Keywords, ParseQueries) {
  const auto q = parse_drug_queries("drug,keyword\nghb,geeb\nghb,\"g, h\"\n");
  ASSERT_EQ(q.size(), 1u);
  EXPECT_EQ(q[0].keywords.size(), 2u);
  EXPECT_THROW(parse_drug_queries("drug,keyword\nheroin,h\n"), Error);
}

}  // namespace
}  // namespace weakpol
