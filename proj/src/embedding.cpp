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

#include <algorithm>
#include <cmath>
#include <map>

#include "weakpol/csv.hpp"
#include "weakpol/features.hpp"
#include "weakpol/rng.hpp"

namespace weakpol {

EmbeddingModel::EmbeddingModel(EmbeddingConfig config, std::vector<std::string> vocab, std::vector<std::size_t> counts,
                               std::vector<double> vectors)
    : config_(config), vocab_(std::move(vocab)), counts_(std::move(counts)), vectors_(std::move(vectors)) {
  if (config_.dimension == 0) throw Error("embedding dimension must be positive");
  if (counts_.size() != vocab_.size() || vectors_.size() != vocab_.size() * config_.dimension)
    throw Error("embedding model: inconsistent vocabulary and vector sizes");
  for (double v : vectors_)
    if (!std::isfinite(v)) throw Error("embedding model: non-finite vector component");
  for (std::size_t i = 0; i < vocab_.size(); ++i)
    if (!index_.emplace(vocab_[i], i).second) throw Error("embedding model: duplicate term '" + vocab_[i] + "'");
}

std::optional<std::size_t> EmbeddingModel::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

nlohmann::json EmbeddingModel::to_json() const {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["dimension"] = config_.dimension;
  j["config"] = {{"architecture", "cbow"},      {"window", config_.window},       {"min_count", config_.min_count},
                 {"negatives", config_.negatives}, {"epochs", config_.epochs},    {"alpha", config_.alpha},
                 {"min_alpha", config_.min_alpha}, {"sample", config_.sample},    {"seed", config_.seed}};
  nlohmann::json vocab = nlohmann::json::object();
  nlohmann::json counts = nlohmann::json::object();
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    auto v = vector(i);
    vocab[vocab_[i]] = std::vector<double>(v.begin(), v.end());
    counts[vocab_[i]] = counts_[i];
  }
  j["vocab"] = std::move(vocab);
  j["counts"] = std::move(counts);
  return j;
}

EmbeddingModel EmbeddingModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) throw Error("unsupported embedding model version");
    EmbeddingConfig c;
    c.dimension = j.at("dimension").get<std::size_t>();
    const auto& cj = j.at("config");
    c.window = cj.at("window").get<std::size_t>();
    c.min_count = cj.at("min_count").get<std::size_t>();
    c.negatives = cj.at("negatives").get<std::size_t>();
    c.epochs = cj.at("epochs").get<std::size_t>();
    c.alpha = cj.at("alpha").get<double>();
    c.min_alpha = cj.at("min_alpha").get<double>();
    c.sample = cj.at("sample").get<double>();
    c.seed = cj.at("seed").get<std::uint64_t>();
    std::vector<std::pair<std::size_t, std::string>> order;
    for (const auto& [term, n] : j.at("counts").items()) order.emplace_back(n.get<std::size_t>(), term);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<std::string> vocab;
    std::vector<std::size_t> counts;
    std::vector<double> vectors;
    for (const auto& [n, term] : order) {
      const auto v = j.at("vocab").at(term).get<std::vector<double>>();
      if (v.size() != c.dimension) throw Error("vector for '" + term + "' has wrong length");
      vocab.push_back(term);
      counts.push_back(n);
      vectors.insert(vectors.end(), v.begin(), v.end());
    }
    if (j.at("vocab").size() != vocab.size()) throw Error("vocab and counts disagree");
    return EmbeddingModel(c, std::move(vocab), std::move(counts), std::move(vectors));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid embedding model: ") + e.what());
  }
}

void EmbeddingModel::save(const std::filesystem::path& path) const { write_text_file(path, to_json().dump() + "\n"); }

EmbeddingModel EmbeddingModel::load(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

namespace {

double sigmoid(double x) {
  if (x > 30) return 1.0;
  if (x < -30) return 0.0;
  return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace

EmbeddingModel train_embeddings(std::span<const std::vector<std::string>> sentences, const EmbeddingConfig& config) {
  if (sentences.empty()) throw Error("train_embeddings: empty corpus");
  if (config.dimension == 0 || config.window == 0 || config.epochs == 0)
    throw Error("train_embeddings: dimension, window and epochs must be positive");

  std::map<std::string, std::size_t> freq;
  for (const auto& s : sentences)
    for (const auto& t : s) ++freq[t];
  std::vector<std::pair<std::size_t, std::string>> order;
  for (const auto& [term, n] : freq)
    if (n >= config.min_count) order.emplace_back(n, term);
  if (order.empty()) throw Error("train_embeddings: empty vocabulary");
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  const std::size_t v = order.size();
  const std::size_t dim = config.dimension;
  std::vector<std::string> vocab;
  std::vector<std::size_t> counts;
  std::map<std::string, std::size_t> index;
  std::size_t total = 0;
  for (std::size_t i = 0; i < v; ++i) {
    vocab.push_back(order[i].second);
    counts.push_back(order[i].first);
    index[order[i].second] = i;
    total += order[i].first;
  }

  Rng rng(derive_seed(config.seed, {hash_string("cbow")}));
  std::vector<double> syn0(v * dim), syn1(v * dim, 0.0);
  for (double& x : syn0) x = (rng.uniform() - 0.5) / static_cast<double>(dim);

  std::vector<double> cumulative(v);
  double acc = 0.0;
  for (std::size_t i = 0; i < v; ++i) cumulative[i] = (acc += std::pow(static_cast<double>(counts[i]), 0.75));
  auto draw_negative = [&]() {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(), static_cast<std::ptrdiff_t>(v - 1)));
  };

  std::vector<double> keep_prob(v, 1.0);
  if (config.sample > 0) {
    const double thr = config.sample * static_cast<double>(total);
    for (std::size_t i = 0; i < v; ++i) {
      const double f = static_cast<double>(counts[i]);
      keep_prob[i] = std::min(1.0, (std::sqrt(f / thr) + 1.0) * thr / f);
    }
  }

  const double total_work = static_cast<double>(config.epochs) * static_cast<double>(total) + 1.0;
  double processed = 0.0;
  std::vector<std::size_t> ids;
  std::vector<double> h(dim), e(dim);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& sentence : sentences) {
      ids.clear();
      for (const auto& t : sentence) {
        auto it = index.find(t);
        if (it == index.end()) continue;
        processed += 1.0;
        if (keep_prob[it->second] < 1.0 && keep_prob[it->second] < rng.uniform()) continue;
        ids.push_back(it->second);
      }
      const double alpha = std::max(config.min_alpha, config.alpha - (config.alpha - config.min_alpha) * processed / total_work);
      for (std::size_t pos = 0; pos < ids.size(); ++pos) {
        const std::size_t reduced = config.window - static_cast<std::size_t>(rng.below(config.window));
        const std::size_t lo = pos >= reduced ? pos - reduced : 0;
        const std::size_t hi = std::min(ids.size() - 1, pos + reduced);
        std::fill(h.begin(), h.end(), 0.0);
        std::size_t n_ctx = 0;
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          const double* src = &syn0[ids[c] * dim];
          for (std::size_t d = 0; d < dim; ++d) h[d] += src[d];
          ++n_ctx;
        }
        if (n_ctx == 0) continue;
        for (double& x : h) x /= static_cast<double>(n_ctx);
        std::fill(e.begin(), e.end(), 0.0);
        for (std::size_t k = 0; k <= config.negatives; ++k) {
          std::size_t target = ids[pos];
          double label = 1.0;
          if (k > 0) {
            target = draw_negative();
            if (target == ids[pos]) continue;
            label = 0.0;
          }
          double* out = &syn1[target * dim];
          double f = 0.0;
          for (std::size_t d = 0; d < dim; ++d) f += h[d] * out[d];
          const double g = (label - sigmoid(f)) * alpha;
          for (std::size_t d = 0; d < dim; ++d) {
            e[d] += g * out[d];
            out[d] += g * h[d];
          }
        }
        for (double& x : e) x /= static_cast<double>(n_ctx);
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          double* dst = &syn0[ids[c] * dim];
          for (std::size_t d = 0; d < dim; ++d) dst[d] += e[d];
        }
      }
    }
  }
  return EmbeddingModel(config, std::move(vocab), std::move(counts), std::move(syn0));
}

std::vector<double> embed_tweet(std::span<const std::string> tokens, const EmbeddingModel& model) {
  std::vector<std::size_t> idx;
  for (const auto& t : tokens)
    if (auto i = model.find(t)) idx.push_back(*i);
  std::vector<double> out(model.dimension(), 0.0);
  if (idx.empty()) return out;
  std::sort(idx.begin(), idx.end());
  for (std::size_t i : idx) {
    auto v = model.vector(i);
    for (std::size_t d = 0; d < out.size(); ++d) out[d] += v[d];
  }
  for (double& x : out) x /= static_cast<double>(idx.size());
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0 || bb == 0) return 0.0;
  return ab / std::sqrt(aa * bb);
}

}  // namespace weakpol
