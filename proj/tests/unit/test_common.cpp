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

#include <set>
#include <sstream>

#include "generators.hpp"
#include "weakpol/common.hpp"
#include "weakpol/csv.hpp"
#include "weakpol/matrix.hpp"
#include "weakpol/rng.hpp"
#include "weakpol/text.hpp"

namespace weakpol {
namespace {

TEST(Rng, SameSeedSameStream) {
  Rng a(17), b(17);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, DeriveSeedSeparatesTags) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(derive_seed(1, {t}));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_EQ(derive_seed(5, {9}), derive_seed(5, {9}));
}

TEST(Rng, BelowStaysInRange) {
  Rng rng(3);
  for (std::uint64_t n : {1ULL, 2ULL, 7ULL, 1000ULL})
    for (int i = 0; i < 500; ++i) EXPECT_LT(rng.below(n), n);
}

TEST(Rng, UniformInUnitInterval) {
  Rng rng(4);
  double sum = 0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 20000, 0.5, 0.01);
}

TEST(Rng, CounterUniformIsPure) {
  EXPECT_EQ(counter_uniform(11, 5), counter_uniform(11, 5));
  EXPECT_NE(counter_uniform(11, 5), counter_uniform(11, 6));
}

TEST(Rng, ShuffleIsPermutation) {
  Rng rng(9);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  rng.shuffle(std::span<int>(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Csv, QuotedFieldsAndComments) {
  const auto t = parse_csv("a,b\n# note\n\"x,1\",\"he said \"\"hi\"\"\"\n\"multi\nline\",2\n");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0], "x,1");
  EXPECT_EQ(t.rows[0][1], "he said \"hi\"");
  EXPECT_EQ(t.rows[1][0], "multi\nline");
  EXPECT_EQ(t.line_numbers[0], 3u);
  EXPECT_EQ(t.line_numbers[1], 4u);
}

TEST(Csv, UnterminatedQuoteThrows) { EXPECT_THROW(parse_csv("a\n\"open\n"), Error); }

TEST(Csv, MissingColumnNamed) {
  const auto t = parse_csv("a,b\n1,2\n");
  EXPECT_EQ(t.index("b"), 1u);
  EXPECT_FALSE(t.find("c"));
  EXPECT_THROW(t.index("c"), Error);
}

TEST(Csv, EscapeRoundTripProperty) {
  Rng rng(21);
  const std::string alphabet = "ab,\"\n x";
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> row(2 + rng.below(4));
    for (auto& f : row)
      for (std::size_t k = rng.below(8); k > 0; --k) f += alphabet[rng.below(alphabet.size())];
    std::ostringstream out;
    write_csv_row(out, std::vector<std::string>{"h"});
    write_csv_row(out, row);
    const auto t = parse_csv(out.str());
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0], row);
  }
}

TEST(Csv, FormatExactRoundTrips) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, static_cast<double>(rng.between(-8, 8)));
    EXPECT_EQ(std::stod(format_exact(v)), v);
  }
  EXPECT_EQ(format_fixed(0.83333, 4), "0.8333");
}

TEST(Csv, MissingFileIsIoError) { EXPECT_THROW(read_text_file("/nonexistent/weakpol/x.csv"), IoError); }

TEST(Text, Utf8RoundTrip) {
  const std::string s = "caf\xc3\xa9 \xf0\x9f\x98\x80 ok";
  EXPECT_EQ(encode_utf8(decode_utf8(s)), s);
  EXPECT_EQ(decode_utf8(s).size(), 9u);
}

TEST(Text, SplitTrimJoin) {
  EXPECT_EQ(trim("  a b \t"), "a b");
  EXPECT_EQ(split("a,,b", ','), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(join({"x", "y"}, "-"), "x-y");
  EXPECT_EQ(split_whitespace(" a  b\tc ").size(), 3u);
}

TEST(PhraseMatcher, LeftmostLongestAtWordBoundaries) {
  const PhraseMatcher m({"molly", "molly water", "mol"});
  const auto hits = m.find_all("some molly water and molly, not mollyx");
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(m.pattern(hits[0].pattern), "molly water");
  EXPECT_EQ(m.pattern(hits[1].pattern), "molly");
}

TEST(PhraseMatcher, CaseInsensitive) {
  const PhraseMatcher m({"Ghb"});
  EXPECT_EQ(m.find_all("took GHB today").size(), 1u);
}

TEST(PhraseMatcher, MatchesNaiveScanProperty) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> words;
    for (int i = 0; i < 6; ++i) words.push_back(testing::random_word(rng, 1 + rng.below(3)));
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    const PhraseMatcher m(words);
    std::vector<std::string> tokens;
    for (int i = 0; i < 20; ++i) tokens.push_back(rng.bernoulli(0.5) ? words[rng.below(words.size())] : testing::random_word(rng, 2));
    const std::string text = join(tokens, " ");
    // Single-word patterns over space-separated tokens: every token equal to a pattern is a hit.
    std::size_t expected = 0;
    for (const auto& t : tokens) expected += std::count(words.begin(), words.end(), t) > 0;
    EXPECT_EQ(m.find_all(text).size(), expected) << text;
  }
}

TEST(Matrix, SelectAndAppend) {
  Matrix m;
  m.append_row(std::vector<double>{1, 2});
  m.append_row(std::vector<double>{3, 4});
  m.append_row(std::vector<double>{5, 6});
  const std::vector<std::size_t> rows{2, 0};
  const Matrix s = m.select_rows(rows);
  EXPECT_EQ(s(0, 0), 5);
  EXPECT_EQ(s(1, 1), 2);
  const std::vector<std::size_t> cols{1};
  EXPECT_EQ(m.select_cols(cols).column(0), (std::vector<double>{2, 4, 6}));
  EXPECT_THROW(m.append_row(std::vector<double>{1}), Error);
}

TEST(Enums, NamesRoundTrip) {
  for (Drug d : kAllDrugs) EXPECT_EQ(parse_drug(to_string(d)), d);
  for (Polarity p : {Polarity::positive, Polarity::negative, Polarity::context, Polarity::uncertain})
    EXPECT_EQ(parse_polarity(to_string(p)), p);
  EXPECT_FALSE(parse_drug("heroin"));
}

}  // namespace
}  // namespace weakpol
