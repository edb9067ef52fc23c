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

#include "generators.hpp"
#include "weakpol/common.hpp"
#include "weakpol/lexicon.hpp"

namespace weakpol {
namespace {

constexpr Polarity kLabels[] = {Polarity::positive, Polarity::negative, Polarity::context};

TEST(VoteThreshold, Range) {
  EXPECT_THROW(VoteThreshold(0.5), Error);
  EXPECT_THROW(VoteThreshold(1.01), Error);
  EXPECT_NO_THROW(VoteThreshold(1.0));
  EXPECT_TRUE(VoteThreshold(0.6).reached(2, 3));
  EXPECT_FALSE(VoteThreshold(0.7).reached(2, 3));
}

TEST(Consolidate, UnanimousAndSplit) {
  const std::vector<Polarity> split{Polarity::positive, Polarity::negative, Polarity::context};
  EXPECT_EQ(consolidate_votes(split), Polarity::uncertain);
  const std::vector<Polarity> one{Polarity::negative};
  EXPECT_EQ(consolidate_votes(one), Polarity::negative);
  EXPECT_THROW(consolidate_votes(std::vector<Polarity>{}), Error);
  const std::vector<Polarity> bad{Polarity::uncertain};
  EXPECT_THROW(consolidate_votes(bad), Error);
}

TEST(Consolidate, MatchesCountingOracleProperty) {
  Rng rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<Polarity> votes(1 + rng.below(7));
    for (auto& v : votes) v = kLabels[rng.below(3)];
    const double frac = rng.uniform(0.51, 1.0);
    Polarity expect = Polarity::uncertain;
    for (auto l : kLabels)
      if (static_cast<double>(std::count(votes.begin(), votes.end(), l)) >=
          VoteThreshold(frac).value() * static_cast<double>(votes.size()) - 1e-12)
        expect = l;
    EXPECT_EQ(consolidate_votes(votes, VoteThreshold(frac)), expect);
  }
}

TEST(Consolidate, ValidatesEntries) {
  LexiconEntry e{"molly", Drug::ecstasy, Source::slang, {{"a", Polarity::positive}, {"a", Polarity::positive}}};
  EXPECT_THROW(consolidate(std::vector<LexiconEntry>{e}), Error);
  e.votes[1].annotator = "b";
  EXPECT_EQ(consolidate(std::vector<LexiconEntry>{e})[0].polarity, Polarity::positive);
  e.term = "Molly";
  EXPECT_THROW(consolidate(std::vector<LexiconEntry>{e}), Error);
}

TEST(Lexicon, CsvRoundTrip) {
  const auto entries = parse_lexicon_csv(
      "term,drug,source,vote_1,vote_2,vote_3\n"
      "rolling,ecstasy,slang,positive,positive,context\n"
      "bad trip,,slang,negative,negative,negative\n");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_FALSE(entries[1].drug);
  std::ostringstream out;
  write_lexicon_csv(out, entries);
  const auto again = parse_lexicon_csv(out.str());
  ASSERT_EQ(again.size(), 2u);
  EXPECT_EQ(again[0].term, "rolling");
  EXPECT_EQ(again[0].votes.size(), 3u);

  const auto terms = consolidate(entries);
  std::ostringstream c;
  write_consolidated_csv(c, terms);
  EXPECT_EQ(parse_consolidated_csv(c.str()), terms);
}

TEST(Matcher, LeftmostLongestNonOverlapping) {
  const std::vector<ConsolidatedTerm> terms{{"bad", Source::slang, Polarity::negative, {}},
                                            {"bad trip", Source::slang, Polarity::negative, {}},
                                            {"trip", Source::slang, Polarity::positive, {}}};
  const auto m = build_matcher(terms);
  const auto hits = find_terms("a bad trip then a trip", m);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].term, "bad trip");
  EXPECT_EQ(hits[0].begin, 2u);
  EXPECT_EQ(hits[1].term, "trip");
  EXPECT_LT(hits[0].end, hits[1].begin);
}

TEST(Matcher, RejectsMixedSourcesAndDuplicates) {
  std::vector<ConsolidatedTerm> terms{{"a", Source::slang, Polarity::positive, {}},
                                      {"b", Source::concept_, Polarity::positive, {}}};
  EXPECT_THROW(build_matcher(terms), Error);
  terms[1] = {"a", Source::slang, Polarity::negative, {}};
  EXPECT_THROW(build_matcher(terms), Error);
  EXPECT_THROW(build_matcher(std::vector<ConsolidatedTerm>{}), Error);
}

TEST(Matcher, HitsAreSortedAndDisjointProperty) {
  Rng rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ConsolidatedTerm> terms;
    std::set<std::string> seen;
    for (int i = 0; i < 8; ++i) {
      std::string t = testing::random_word(rng, 1 + rng.below(2));
      if (rng.bernoulli(0.3)) t += " " + testing::random_word(rng, 1);
      if (seen.insert(t).second) terms.push_back({t, Source::concept_, kLabels[rng.below(3)], {}});
    }
    const auto m = build_matcher(terms);
    std::string text;
    for (int i = 0; i < 30; ++i) text += testing::random_word(rng, 1 + rng.below(2)) + " ";
    const auto hits = m.find(text);
    for (std::size_t i = 0; i < hits.size(); ++i) {
      EXPECT_EQ(text.substr(hits[i].begin, hits[i].end - hits[i].begin), hits[i].term);
      if (i > 0) EXPECT_LE(hits[i - 1].end, hits[i].begin);
    }
  }
}

TEST(Annotations, ParseAndReject) {
  const auto set = parse_concept_annotations(
      "tweet_id,concept_id,matched_text,polarity\n"
      "1,C01,euphoria,positive\n"
      "1,C02,nausea,negative\n"
      ",C03,high,positive\n"
      "3,C04,party,sideways\n");
  EXPECT_EQ(set.by_tweet.at("1").size(), 2u);
  EXPECT_EQ(set.rejected.size(), 2u);
  EXPECT_TRUE(is_concept_annotation_csv("tweet_id,concept_id,matched_text,polarity\n"));
  EXPECT_FALSE(is_concept_annotation_csv("term,drug,source,vote_1\n"));
}

}  // namespace
}  // namespace weakpol
