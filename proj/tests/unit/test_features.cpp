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

#include <cmath>
#include <sstream>

#include "generators.hpp"
#include "weakpol/common.hpp"
#include "weakpol/features.hpp"
#include "weakpol/kernels.hpp"

namespace weakpol {
namespace {

TEST(Stage2, TokenizesAndDropsStopwords) {
  const auto t = preprocess_stage2("@bob The 3 MOLLY, was great!! #fun http://x.y/z it's");
  EXPECT_EQ(t, (std::vector<std::string>{"molly", "great"}));
  EXPECT_TRUE(default_stopwords().count("the"));
}

TEST(Stage2, ParseStopwords) {
  const auto s = parse_stopwords("# list\na\n\nthe\n");
  EXPECT_EQ(s.size(), 2u);
}

std::vector<std::vector<std::string>> toy_sentences(Rng& rng) {
  const std::vector<std::string> a{"molly", "dance", "night", "love", "music"};
  const std::vector<std::string> b{"sick", "bad", "comedown", "hospital", "tired"};
  std::vector<std::vector<std::string>> out;
  for (int i = 0; i < 400; ++i) {
    const auto& pool = i % 2 ? a : b;
    std::vector<std::string> s;
    for (int k = 0; k < 8; ++k) s.push_back(pool[rng.below(pool.size())]);
    out.push_back(s);
  }
  return out;
}

TEST(Embedding, DeterministicAndClustered) {
  Rng rng(2);
  const auto sentences = toy_sentences(rng);
  EmbeddingConfig cfg;
  cfg.dimension = 12;
  cfg.epochs = 10;
  cfg.seed = 5;
  const auto m1 = train_embeddings(sentences, cfg);
  const auto m2 = train_embeddings(sentences, cfg);
  EXPECT_TRUE(m1 == m2);
  EXPECT_EQ(m1.size(), 10u);
  const auto v = [&](const char* w) { return m1.vector(*m1.find(w)); };
  EXPECT_GT(cosine_similarity(v("molly"), v("dance")), cosine_similarity(v("molly"), v("hospital")));
  EXPECT_TRUE(EmbeddingModel::from_json(m1.to_json()) == m1);
}

TEST(Embedding, EmptyVocabularyThrows) {
  EmbeddingConfig cfg;
  cfg.min_count = 5;
  const std::vector<std::vector<std::string>> s{{"a", "b"}};
  EXPECT_THROW(train_embeddings(s, cfg), Error);
  EXPECT_THROW(train_embeddings(std::vector<std::vector<std::string>>{}, cfg), Error);
}

TEST(Embedding, TweetVectorIsMeanOfKnownTokens) {
  EmbeddingConfig cfg;
  cfg.dimension = 2;
  const EmbeddingModel m(cfg, {"a", "b"}, {3, 3}, {1, 2, 3, 6});
  const std::vector<std::string> toks{"a", "zzz", "b"};
  EXPECT_EQ(embed_tweet(toks, m), (std::vector<double>{2, 4}));
  const std::vector<std::string> none{"zzz"};
  EXPECT_EQ(embed_tweet(none, m), (std::vector<double>{0, 0}));
}

TEST(Features, AssembleWidthMatchesNames) {
  TweetRecord r;
  r.text = "x";
  r.country_code = "NL";
  r.user.followers = 10;
  const std::vector<double> emb(kEmbeddingDim, 0.5);
  AssembleStats stats;
  const auto row = assemble_features(r, {true, false, false}, emb, ContinentTable::defaults(), &stats);
  EXPECT_EQ(row.size(), feature_names(kEmbeddingDim).size());
  EXPECT_EQ(stats.unknown_country, 0u);
  r.country_code = "ZZ";
  assemble_features(r, {true, false, false}, emb, ContinentTable::defaults(), &stats);
  EXPECT_EQ(stats.unknown_country, 1u);
  EXPECT_EQ(ContinentTable::defaults().continent("NL"), "europe");
}

TEST(Standardizer, ZeroMeanUnitVarianceProperty) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix x = testing::random_matrix(rng, 5 + rng.below(50), 1 + rng.below(6));
    for (std::size_t i = 0; i < x.rows(); ++i) x(i, 0) = 7.0;  // constant column
    const auto s = Standardizer::fit(x);
    EXPECT_TRUE(s.zero_variance[0]);
    const Matrix z = s.transform(x);
    for (std::size_t i = 0; i < x.rows(); ++i) EXPECT_EQ(z(i, 0), 7.0);  // left as is
    for (std::size_t c = 1; c < x.cols(); ++c) {
      double mean = 0, var = 0;
      for (std::size_t i = 0; i < x.rows(); ++i) mean += z(i, c);
      mean /= static_cast<double>(x.rows());
      for (std::size_t i = 0; i < x.rows(); ++i) var += (z(i, c) - mean) * (z(i, c) - mean);
      var /= static_cast<double>(x.rows());
      EXPECT_NEAR(mean, 0.0, 1e-12);
      EXPECT_NEAR(var, 1.0, 1e-9);
    }
    const Matrix back = s.inverse(z);
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t c = 0; c < x.cols(); ++c) EXPECT_NEAR(back(i, c), x(i, c), 1e-9);
  }
}

TEST(Prune, GreedyMatchesOracleProperty) {
  Rng rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 30, d = 2 + rng.below(7);
    Matrix x = testing::random_matrix(rng, n, d);
    for (std::size_t c = 1; c < d; ++c)
      if (rng.bernoulli(0.4)) {
        const std::size_t src = rng.below(c);
        for (std::size_t i = 0; i < n; ++i) x(i, c) = x(i, src) + 0.1 * rng.normal();
      }
    std::vector<std::string> names;
    for (std::size_t c = 0; c < d; ++c) names.push_back("f" + std::to_string(c));
    const std::set<std::string> keep{"f" + std::to_string(rng.below(d))};
    const Matrix r = kernels::pearson_serial(x);
    std::vector<bool> dropped(d, false);
    for (std::size_t i = 0; i < d; ++i) {
      if (dropped[i]) continue;
      for (std::size_t j = i + 1; j < d; ++j)
        if (!dropped[j] && !keep.count(names[j]) && std::abs(r(i, j)) > 0.8) dropped[j] = true;
    }
    std::vector<std::size_t> expect;
    for (std::size_t c = 0; c < d; ++c)
      if (!dropped[c]) expect.push_back(c);
    EXPECT_EQ(prune_correlated(x, names, 0.8, keep).kept, expect);
    EXPECT_EQ(prune_correlated(x, names, 0.8, keep, kernels::Exec::serial).kept, expect);
  }
}

TEST(Schema, ApplyAndJsonRoundTrip) {
  Rng rng(6);
  Matrix x = testing::random_matrix(rng, 40, 4);
  for (std::size_t i = 0; i < 40; ++i) x(i, 3) = 2 * x(i, 0);
  const std::vector<std::string> names{"a", "b", "c", "d"};
  const auto s = fit_schema(x, names, 0.8, {});
  EXPECT_EQ(s.retained, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(s.drops.size(), 1u);
  EXPECT_EQ(s.drops[0].dropped, "d");
  const auto again = FeatureSchema::from_json(s.to_json());
  EXPECT_EQ(again.hash(), s.hash());
  EXPECT_EQ(again.apply(x), s.apply(x));
  EXPECT_EQ(s.apply(x).cols(), 3u);
}

TEST(FeatureCsv, RoundTripIsExact) {
  Rng rng(7);
  FeatureTable t;
  t.names = {"x1", "x2"};
  t.x = testing::random_matrix(rng, 25, 2);
  t.y = testing::random_labels(rng, 25, 0.3);
  std::ostringstream out;
  write_feature_csv(out, t);
  const auto back = parse_feature_csv(out.str());
  EXPECT_EQ(back.names, t.names);
  EXPECT_EQ(back.x, t.x);
  EXPECT_EQ(back.y, t.y);
}

}  // namespace
}  // namespace weakpol
