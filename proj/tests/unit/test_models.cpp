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
#include <filesystem>

#include "generators.hpp"
#include "weakpol/common.hpp"
#include "weakpol/evalharness.hpp"
#include "weakpol/models.hpp"
#include "weakpol/tree.hpp"

namespace weakpol {
namespace {

struct Blobs {
  Matrix x;
  std::vector<int> y;
};

Blobs make_blobs(std::uint64_t seed, std::size_t n = 300, double rate = 0.3, double shift = 1.5) {
  Rng rng(seed);
  Blobs b;
  b.y = testing::random_labels(rng, n, rate, 10);
  b.x = testing::blobs(rng, b.y, 4, shift);
  return b;
}

TEST(Binned, BinsAgreeWithCutsProperty) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x = testing::random_matrix(rng, 50 + rng.below(400), 3);
    for (std::size_t i = 0; i < x.rows(); ++i) x(i, 2) = static_cast<double>(rng.below(4));
    const std::size_t max_bins = 2 + rng.below(255);
    const auto b = tree::BinnedMatrix::build(x, max_bins);
    for (std::size_t f = 0; f < 3; ++f) {
      const auto& cuts = b.cuts(f);
      EXPECT_LE(b.n_bins(f), max_bins);
      EXPECT_TRUE(std::is_sorted(cuts.begin(), cuts.end()));
      for (std::size_t i = 0; i < x.rows(); ++i) {
        const std::size_t bin = b.bin(i, f);
        if (bin > 0) EXPECT_GE(x(i, f), cuts[bin - 1]);
        if (bin < cuts.size()) EXPECT_LT(x(i, f), cuts[bin]);
        EXPECT_EQ(b.row_slots(i)[f], b.offset(f) + bin);
      }
    }
    EXPECT_LE(b.n_bins(2), 4u);
  }
}

TEST(Cart, RespectsDepthAndFitsSeparableData) {
  const auto d = make_blobs(2, 200, 0.5, 6.0);
  const auto b = tree::BinnedMatrix::build(d.x);
  const std::vector<double> w(d.y.size(), 1.0);
  Rng rng(0);
  for (int depth : {1, 2, 4}) {
    tree::CartParams p;
    p.max_depth = depth;
    const auto t = tree::grow_cart(b, d.y, w, p, rng);
    EXPECT_LE(t.depth(), static_cast<std::size_t>(depth));
  }
  tree::CartParams full;
  const auto t = tree::grow_cart(b, d.y, w, full, rng);
  for (std::size_t i = 0; i < d.y.size(); ++i) EXPECT_EQ(t.predict(d.x.row(i)), d.y[i]);
  EXPECT_EQ(tree::Tree::from_json(t.to_json()), t);
}

TEST(Boost, TrainingLossIsMonotone) {
  const auto d = make_blobs(3);
  std::vector<double> w(d.y.size(), 1.0);
  for (std::size_t i = 0; i < w.size(); i += 3) w[i] = 2.5;
  std::vector<double> trace;
  tree::BoostParams p;
  p.max_depth = 3;
  models::BoostedTreesEstimator::train(d.x, d.y, w, 40, p, &trace);
  ASSERT_EQ(trace.size(), 41u);
  for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1] + 1e-12);
}

TEST(Boost, PrefixModelEqualsSmallerFit) {
  const auto d = make_blobs(4);
  ModelSpec large{Algorithm::gradient_boosted_trees, {{"max_depth", std::int64_t{3}}, {"n_estimators", std::int64_t{80}}}, 1};
  ModelSpec small = large;
  small.params["n_estimators"] = std::int64_t{50};
  small.seed = 9;
  ASSERT_TRUE(shares_prefix(small, large));
  const auto fl = fit(large, d.x, d.y);
  const auto cut = prefix_model(fl, small);
  const auto direct = fit(small, d.x, d.y);
  EXPECT_EQ(predict_proba(cut, d.x), predict_proba(direct, d.x));
  EXPECT_EQ(cut.spec(), small);

  ModelSpec deeper = large;
  deeper.params["max_depth"] = std::int64_t{4};
  EXPECT_FALSE(shares_prefix(deeper, large));
  EXPECT_FALSE(shares_prefix(large, small));
  EXPECT_THROW(prefix_model(fl, deeper), Error);
}

}  // namespace

void PrintTo(Algorithm a, std::ostream* os) { *os << to_string(a); }

namespace {

class EveryAlgorithm : public ::testing::TestWithParam<Algorithm> {};

TEST_P(EveryAlgorithm, LearnsBlobsAndRoundTrips) {
  const auto train = make_blobs(5, 300);
  const auto test = make_blobs(6, 200);
  const auto spec = default_spec(GetParam(), 3);
  const auto m = fit(spec, train.x, train.y, {}, {"h1"});
  const auto s = predict_proba(m, test.x, "h1");
  for (double v : s) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_GT(auroc(test.y, s), 0.8) << to_string(GetParam());
  EXPECT_EQ(m.meta().rows, train.y.size());

  const auto path = std::filesystem::temp_directory_path() / ("weakpol_model_" + std::string(to_string(GetParam())) + ".json");
  m.save(path);
  const auto back = TrainedModel::load(path);
  EXPECT_EQ(predict_proba(back, test.x), s);
  EXPECT_EQ(back.spec(), spec);
  std::filesystem::remove(path);

  EXPECT_THROW(predict_proba(m, test.x, "other"), Error);
  EXPECT_THROW(predict_proba(m, Matrix(2, 3)), Error);
}

TEST_P(EveryAlgorithm, SameSeedSameModelAcrossExec) {
  const auto d = make_blobs(7, 200);
  const auto spec = sample_specs(GetParam(), 1, 11)[0];
  FitOptions serial;
  serial.exec = kernels::Exec::serial;
  EXPECT_EQ(predict_proba(fit(spec, d.x, d.y), d.x), predict_proba(fit(spec, d.x, d.y, {}, serial), d.x));
}

TEST_P(EveryAlgorithm, SampledSpecsStayInSpaceProperty) {
  const auto specs = sample_specs(GetParam(), 50, 12);
  EXPECT_EQ(specs, sample_specs(GetParam(), 50, 12));
  for (const auto& s : specs) {
    EXPECT_NO_THROW(search_space(GetParam()).validate(s.params));
    EXPECT_EQ(ModelSpec::from_json(s.to_json()), s);
  }
  EXPECT_NO_THROW(search_space(GetParam()).validate(default_spec(GetParam()).params));
}

INSTANTIATE_TEST_SUITE_P(Models, EveryAlgorithm, ::testing::ValuesIn(kAllAlgorithms),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Fit, RejectsBadInput) {
  auto d = make_blobs(8, 50);
  const auto spec = default_spec(Algorithm::logistic_regression);
  std::vector<int> one_class(d.y.size(), 0);
  EXPECT_THROW(fit(spec, d.x, one_class), Error);
  std::vector<double> neg(d.y.size(), 1.0);
  neg[3] = -1;
  EXPECT_THROW(fit(spec, d.x, d.y, neg), Error);
  EXPECT_THROW(fit(spec, d.x, d.y, std::vector<double>(d.y.size(), 0.0)), Error);
  d.x(4, 1) = std::nan("");
  EXPECT_THROW(fit(spec, d.x, d.y), Error);
  ModelSpec bad = spec;
  bad.params["c"] = -1.0;
  EXPECT_THROW(fit(bad, make_blobs(8, 50).x, make_blobs(8, 50).y), Error);
}

TEST(Algorithms, ParseAliases) {
  for (auto a : kAllAlgorithms) {
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
    EXPECT_EQ(parse_algorithm(display_name(a)), a);
  }
  EXPECT_EQ(parse_algorithm("xgb"), Algorithm::gradient_boosted_trees);
  EXPECT_FALSE(parse_algorithm("svm"));
}

TEST(Forest, RowOrderDoesNotChangeBootstrap) {
  const auto d = make_blobs(9, 120);
  std::vector<std::size_t> perm(d.y.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = perm.size() - 1 - i;
  const Matrix xr = d.x.select_rows(perm);
  const auto yr = gather<int>(d.y, perm);
  models::ForestEstimator::Config c;
  c.cart.max_features = tree::MaxFeatures::all;
  c.seed = 4;
  models::ForestEstimator a(c), b(c);
  const std::vector<double> w(d.y.size(), 1.0);
  a.grow(d.x, d.y, w, 5);
  b.grow(xr, yr, w, 5);
  for (std::size_t i = 0; i < d.y.size(); ++i) EXPECT_NEAR(a.score_row(d.x.row(i)), b.score_row(d.x.row(i)), 1e-12);
}

}  // namespace
}  // namespace weakpol
