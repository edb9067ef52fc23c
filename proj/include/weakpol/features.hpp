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
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "weakpol/corpus.hpp"
#include "weakpol/kernels.hpp"
#include "weakpol/matrix.hpp"
#include "weakpol/weaklabel.hpp"

namespace weakpol {

// ---- stage-2 text ----

using Stopwords = std::unordered_set<std::string>;

/// One word per line; '#' lines are comments.
Stopwords parse_stopwords(std::string_view text);
/// The bundled 179-word English list.
const Stopwords& default_stopwords();

/// Lowercases, drops @/#/URL tokens, deletes digits and punctuation, splits on
/// whitespace and removes stopwords.
std::vector<std::string> preprocess_stage2(std::string_view text, const Stopwords& stopwords = default_stopwords());

// ---- embeddings ----

struct EmbeddingConfig {
  std::size_t dimension = kEmbeddingDim;
  std::size_t window = 5;
  std::size_t min_count = 2;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double alpha = 0.025;
  double min_alpha = 0.0001;
  double sample = 1e-3;
  std::uint64_t seed = 1;

  bool operator==(const EmbeddingConfig&) const = default;
};

/// Continuous bag-of-words with negative sampling, single-threaded.
class EmbeddingModel {
 public:
  static constexpr int kFormatVersion = 1;

  EmbeddingModel() = default;
  EmbeddingModel(EmbeddingConfig config, std::vector<std::string> vocab, std::vector<std::size_t> counts,
                 std::vector<double> vectors);

  const EmbeddingConfig& config() const { return config_; }
  std::size_t dimension() const { return config_.dimension; }
  std::size_t size() const { return vocab_.size(); }
  const std::string& term(std::size_t i) const { return vocab_[i]; }
  std::size_t count(std::size_t i) const { return counts_[i]; }
  std::optional<std::size_t> find(std::string_view term) const;
  std::span<const double> vector(std::size_t i) const { return {vectors_.data() + i * dimension(), dimension()}; }

  nlohmann::json to_json() const;
  static EmbeddingModel from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static EmbeddingModel load(const std::filesystem::path& path);

  bool operator==(const EmbeddingModel& o) const {
    return config_ == o.config_ && vocab_ == o.vocab_ && counts_ == o.counts_ && vectors_ == o.vectors_;
  }

 private:
  EmbeddingConfig config_;
  std::vector<std::string> vocab_;
  std::vector<std::size_t> counts_;
  std::vector<double> vectors_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Throws Error when there are no sentences or no token reaches min_count.
EmbeddingModel train_embeddings(std::span<const std::vector<std::string>> sentences, const EmbeddingConfig& config);

/// Mean vector of the in-vocabulary tokens, zero vector when there are none.
std::vector<double> embed_tweet(std::span<const std::string> tokens, const EmbeddingModel& model);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

// ---- metadata features ----

/// Metadata columns in canonical order, followed by w2v_0..w2v_{d-1}.
const std::vector<std::string>& metadata_feature_names();
std::vector<std::string> feature_names(std::size_t embedding_dim);
const std::set<std::string>& default_always_keep();

class ContinentTable {
 public:
  /// country_code,continent CSV.
  static ContinentTable parse(std::string_view csv_text);
  static const ContinentTable& defaults();

  /// Lowercase continent name, or nullopt for an unknown code.
  std::optional<std::string> continent(std::string_view country_code) const;
  std::size_t size() const { return map_.size(); }

 private:
  std::map<std::string, std::string> map_;
};

struct AssembleStats {
  std::size_t unknown_country = 0;
};

/// Metadata values followed by the embedding.
std::vector<double> assemble_features(const TweetRecord& record, const std::array<bool, 3>& drugs,
                                      std::span<const double> embedding, const ContinentTable& continents,
                                      AssembleStats* stats = nullptr);

// ---- standardization and pruning ----

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> std;
  std::vector<bool> zero_variance;

  /// Population moments per column.
  static Standardizer fit(const Matrix& x);
  Matrix transform(const Matrix& x) const;
  Matrix inverse(const Matrix& x) const;
};

struct PruneDrop {
  std::string dropped;
  std::string kept;
  double r = 0.0;
};

struct PruneResult {
  std::vector<std::size_t> kept;  // column indices, ascending
  std::vector<PruneDrop> drops;
  std::vector<std::pair<std::string, std::string>> nonfinite_pairs;
};

/// Greedy scan over column pairs in column order; when |r| > threshold the
/// later column is dropped unless it is in `always_keep`.
PruneResult prune_correlated(const Matrix& x, std::span<const std::string> names, double threshold,
                             const std::set<std::string>& always_keep = default_always_keep(),
                             kernels::Exec exec = kernels::Exec::parallel);

/// Retained columns with their standardization parameters.
struct FeatureSchema {
  static constexpr int kFormatVersion = 1;

  std::vector<std::string> input_names;
  std::vector<std::string> retained;
  std::vector<double> mean;  // per retained column
  std::vector<double> std;
  std::vector<bool> zero_variance;
  std::vector<PruneDrop> drops;
  std::vector<std::pair<std::string, std::string>> nonfinite_pairs;
  double threshold = 0.8;

  /// Selects and standardizes the retained columns of a raw matrix laid out as `input_names`.
  Matrix apply(const Matrix& raw) const;
  std::string hash() const;
  nlohmann::json to_json() const;
  static FeatureSchema from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static FeatureSchema load(const std::filesystem::path& path);
};

/// Standardize then prune, both fitted on `raw`.
FeatureSchema fit_schema(const Matrix& raw, std::span<const std::string> names, double threshold = 0.8,
                         const std::set<std::string>& always_keep = default_always_keep());

// ---- tables ----

/// Named design matrix with binary labels.
struct FeatureTable {
  std::vector<std::string> names;
  Matrix x;
  std::vector<int> y;
};

struct RawFeatures {
  FeatureTable table;
  std::vector<std::vector<std::string>> tokens;
  AssembleStats stats;
};

/// Stage-2 tokens for every labeled row.
std::vector<std::vector<std::string>> tokenize_rows(std::span<const LabeledRow> rows,
                                                    const Stopwords& stopwords = default_stopwords());

/// Unstandardized metadata and embedding features for every labeled row.
RawFeatures raw_features(std::span<const LabeledRow> rows, std::span<const std::vector<std::string>> tokens,
                         const EmbeddingModel& model, const ContinentTable& continents = ContinentTable::defaults());

/// Feature matrix CSV: columns in `names` order, then label.
void write_feature_csv(std::ostream& out, const FeatureTable& table);
FeatureTable parse_feature_csv(std::string_view text);
FeatureTable read_feature_csv(const std::filesystem::path& path);

}  // namespace weakpol
