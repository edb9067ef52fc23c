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

#include <sstream>

#include "weakpol/common.hpp"
#include "weakpol/pipeline.hpp"
#include "weakpol/synth.hpp"
#include "weakpol/weaklabel.hpp"

namespace weakpol {
namespace {

TermMatch match(Source s, Polarity p) { return {"t", s, p, 0, 1}; }

TEST(Score, SumsSigns) {
  const std::vector<TermMatch> ms{match(Source::slang, Polarity::positive), match(Source::slang, Polarity::positive),
                                  match(Source::slang, Polarity::negative), match(Source::slang, Polarity::context)};
  const auto v = score_tweet(ms);
  EXPECT_EQ(v.score, 1);
  EXPECT_EQ(v.verdict, Polarity::positive);
  const std::vector<TermMatch> tie{match(Source::slang, Polarity::positive), match(Source::slang, Polarity::negative)};
  EXPECT_EQ(score_tweet(tie).verdict, Polarity::context);
  const std::vector<TermMatch> unc{match(Source::slang, Polarity::uncertain)};
  EXPECT_THROW(score_tweet(unc), Error);
  const std::vector<TermMatch> mixed{match(Source::slang, Polarity::positive), match(Source::concept_, Polarity::positive)};
  EXPECT_THROW(score_tweet(mixed), Error);
}

TEST(Consensus, Precedence) {
  const SourceVerdict pos{Source::slang, 1, Polarity::positive};
  const SourceVerdict neg{Source::concept_, -2, Polarity::negative};
  const SourceVerdict ctx{Source::concept_, 0, Polarity::context};
  EXPECT_EQ(consensus_label(pos, std::nullopt).reason, DiscardReason::missing_source);
  EXPECT_EQ(consensus_label(pos, ctx).reason, DiscardReason::context);
  EXPECT_EQ(consensus_label(pos, neg).reason, DiscardReason::discordant);
  SourceVerdict pos2 = pos;
  pos2.source = Source::concept_;
  EXPECT_EQ(consensus_label(pos, pos2).label, 1);
  SourceVerdict neg1 = neg;
  neg1.source = Source::slang;
  EXPECT_EQ(consensus_label(neg1, neg).label, 0);
}

SynthConfig mixed_config(std::uint64_t seed) {
  SynthConfig c;
  c.n_tweets = 1500;
  c.context_term_rate = 0.1;
  c.discordant_rate = 0.05;
  c.missing_source_rate = 0.1;
  c.uncertain_rate = 0.03;
  c.no_drug_rate = 0.04;
  c.seed = seed;
  return c;
}

TEST(Cascade, MatchesOracleAcrossSeedsProperty) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto c = generate_corpus(mixed_config(seed));
    const auto ds = label_with_terms(c.records, consolidate(c.slang_lexicon), consolidate(c.concept_lexicon));
    ASSERT_EQ(ds.examples.size() + ds.discarded.size(), c.records.size());
    for (const auto& e : ds.examples) EXPECT_EQ(oracle_label(c.truth[e.record_index].terms).label, e.label);
    for (const auto& d : ds.discarded) EXPECT_EQ(oracle_label(c.truth[d.record_index].terms).reason, d.reason);
  }
}

TEST(Cascade, FunnelIsMonotoneAndBalanced) {
  const auto c = generate_corpus(mixed_config(9));
  const auto ds = label_with_terms(c.records, consolidate(c.slang_lexicon), consolidate(c.concept_lexicon));
  const auto stages = ds.funnel.stages();
  for (std::size_t i = 1; i < stages.size(); ++i) EXPECT_LE(stages[i], stages[i - 1]);
  std::size_t discarded = 0;
  for (const auto& [reason, n] : ds.funnel.discards) discarded += n;
  EXPECT_EQ(discarded + ds.funnel.labeled, ds.funnel.input);
  EXPECT_EQ(ds.funnel.labeled, ds.examples.size());
  std::size_t pos = 0;
  for (const auto& e : ds.examples) pos += e.label;
  EXPECT_EQ(ds.funnel.positive, pos);
}

TEST(Cascade, UnknownMatchIdsReported) {
  std::vector<TweetRecord> records(1);
  records[0].id = "a";
  records[0].text = "molly";
  MatchMap slang{{"ghost", {match(Source::slang, Polarity::positive)}}};
  const auto ds = build_dataset(records, slang, {});
  EXPECT_EQ(ds.funnel.unknown_match_ids, std::vector<std::string>{"ghost"});
}

TEST(LabeledCsv, RoundTrip) {
  const auto c = generate_corpus(mixed_config(3));
  const auto ds = label_with_terms(c.records, consolidate(c.slang_lexicon), consolidate(c.concept_lexicon));
  std::ostringstream out;
  write_labeled_csv(out, ds, c.records);
  const auto rows = parse_labeled_csv(out.str());
  const auto expect = labeled_rows(ds, c.records);
  ASSERT_EQ(rows.size(), expect.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].record, expect[i].record);
    EXPECT_EQ(rows[i].label, expect[i].label);
    EXPECT_EQ(rows[i].slang_score, expect[i].slang_score);
    EXPECT_EQ(rows[i].drugs, expect[i].drugs);
  }
}

}  // namespace
}  // namespace weakpol
