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

#include "weakpol/features.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "weakpol/csv.hpp"
#include "weakpol/resources.hpp"
#include "weakpol/rng.hpp"

namespace weakpol {

Stopwords parse_stopwords(std::string_view text) {
  Stopwords out;
  for (const auto& line : split(text, '\n')) {
    const auto word = trim(line);
    if (word.empty() || word.front() == '#') continue;
    out.insert(ascii_lower(word));
  }
  return out;
}

const Stopwords& default_stopwords() {
  static const Stopwords words = parse_stopwords(resources::stopwords_en_txt());
  return words;
}

namespace {

bool is_removed_char(char32_t c) {
  if (c < 0x80) return (c >= '0' && c <= '9') || (c >= 0x21 && c <= 0x2f) || (c >= 0x3a && c <= 0x40) ||
                       (c >= 0x5b && c <= 0x60) || (c >= 0x7b && c <= 0x7e);
  return (c >= 0xa1 && c <= 0xbf) || c == 0xd7 || c == 0xf7 || (c >= 0x2000 && c <= 0x206f) || c == 0xfffd;
}

bool url_like(std::string_view token) {
  return token.find("http") != std::string_view::npos || token.find("www.") != std::string_view::npos;
}

}  // namespace

std::vector<std::string> preprocess_stage2(std::string_view text, const Stopwords& stopwords) {
  const std::string lowered = ascii_lower(text);
  std::vector<std::string> out;
  for (std::string_view raw : split_whitespace(lowered)) {
    if (raw.front() == '@' || raw.front() == '#' || url_like(raw)) continue;
    std::u32string kept;
    for (char32_t c : decode_utf8(raw))
      if (!is_removed_char(c)) kept.push_back(c);
    if (kept.empty()) continue;
    std::string token = encode_utf8(kept);
    if (url_like(token) || stopwords.count(token)) continue;
    out.push_back(std::move(token));
  }
  return out;
}

// ---- metadata features ----

const std::vector<std::string>& metadata_feature_names() {
  static const std::vector<std::string> names{
      "media",          "mention",         "reference",        "like_count",     "retweet_count",
      "reply_count",    "quote_count",     "mentions_ghb",     "mentions_ecstasy", "mentions_2cb",
      "is_europe",      "is_africa",       "is_asia",          "is_america",     "user_location",
      "user_verified",  "user_followers",  "user_following",   "user_tweet_count", "user_listed_count"};
  return names;
}

std::vector<std::string> feature_names(std::size_t embedding_dim) {
  std::vector<std::string> names = metadata_feature_names();
  for (std::size_t i = 0; i < embedding_dim; ++i) names.push_back("w2v_" + std::to_string(i));
  return names;
}

const std::set<std::string>& default_always_keep() {
  static const std::set<std::string> keep{"mentions_ghb", "mentions_ecstasy", "mentions_2cb"};
  return keep;
}

ContinentTable ContinentTable::parse(std::string_view csv_text) {
  const CsvTable t = parse_csv(csv_text);
  const std::size_t code_col = t.index("country_code");
  const std::size_t cont_col = t.index("continent");
  ContinentTable table;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() <= std::max(code_col, cont_col))
      throw Error("continent table line " + std::to_string(t.line_numbers[r]) + ": missing field");
    table.map_[ascii_upper(trim(row[code_col]))] = ascii_lower(trim(row[cont_col]));
  }
  return table;
}

const ContinentTable& ContinentTable::defaults() {
  static const ContinentTable table = parse(resources::continents_csv());
  return table;
}

std::optional<std::string> ContinentTable::continent(std::string_view country_code) const {
  auto it = map_.find(ascii_upper(country_code));
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> assemble_features(const TweetRecord& r, const std::array<bool, 3>& drugs,
                                      std::span<const double> embedding, const ContinentTable& continents,
                                      AssembleStats* stats) {
  std::array<double, 4> geo{0, 0, 0, 0};
  if (r.country_code) {
    if (auto c = continents.continent(*r.country_code)) {
      if (*c == "europe") geo[0] = 1;
      else if (*c == "africa") geo[1] = 1;
      else if (*c == "asia") geo[2] = 1;
      else if (*c == "america") geo[3] = 1;
    } else if (stats) {
      ++stats->unknown_country;
    }
  }
  auto b = [](bool v) { return v ? 1.0 : 0.0; };
  auto n = [](std::int64_t v) { return static_cast<double>(v); };
  std::vector<double> out{b(r.has_media),
                          b(r.has_mention),
                          b(r.reference_kind != ReferenceKind::original),
                          n(r.like_count),
                          n(r.retweet_count),
                          n(r.reply_count),
                          n(r.quote_count),
                          b(drugs[static_cast<std::size_t>(Drug::ghb)]),
                          b(drugs[static_cast<std::size_t>(Drug::ecstasy)]),
                          b(drugs[static_cast<std::size_t>(Drug::twocb)]),
                          geo[0],
                          geo[1],
                          geo[2],
                          geo[3],
                          b(r.user.location_present),
                          b(r.user.verified),
                          n(r.user.followers),
                          n(r.user.following),
                          n(r.user.tweet_count),
                          n(r.user.listed_count)};
  out.insert(out.end(), embedding.begin(), embedding.end());
  return out;
}

// ---- standardization ----

Standardizer Standardizer::fit(const Matrix& x) {
  Standardizer s;
  const std::size_t n = x.rows();
  if (n == 0) throw Error("standardize: empty matrix");
  s.mean.assign(x.cols(), 0.0);
  s.std.assign(x.cols(), 1.0);
  s.zero_variance.assign(x.cols(), false);
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += x(i, j);
    m /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (x(i, j) - m) * (x(i, j) - m);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    s.mean[j] = m;
    if (!(sd > 1e-12 * std::max(1.0, std::abs(m)))) {
      s.zero_variance[j] = true;
      s.std[j] = 1.0;
    } else {
      s.std[j] = sd;
    }
  }
  return s;
}

Matrix Standardizer::transform(const Matrix& x) const {
  if (x.cols() != mean.size())
    throw Error("standardize: expected " + std::to_string(mean.size()) + " columns, got " + std::to_string(x.cols()));
  Matrix out = x;
  kernels::for_each_index(x.rows(), [&](std::size_t i) {
    auto row = out.row(i);
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!zero_variance[j]) row[j] = (row[j] - mean[j]) / std[j];
  });
  return out;
}

Matrix Standardizer::inverse(const Matrix& x) const {
  if (x.cols() != mean.size())
    throw Error("standardize: expected " + std::to_string(mean.size()) + " columns, got " + std::to_string(x.cols()));
  Matrix out = x;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto row = out.row(i);
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!zero_variance[j]) row[j] = row[j] * std[j] + mean[j];
  }
  return out;
}

// ---- pruning ----

PruneResult prune_correlated(const Matrix& x, std::span<const std::string> names, double threshold,
                             const std::set<std::string>& always_keep, kernels::Exec exec) {
  if (names.size() != x.cols()) throw Error("prune_correlated: name count does not match column count");
  const Matrix r = exec == kernels::Exec::serial ? kernels::pearson_serial(x) : kernels::pearson_parallel(x);
  const std::size_t f = x.cols();
  std::vector<bool> dropped(f, false);
  PruneResult out;
  for (std::size_t i = 0; i < f; ++i) {
    if (dropped[i]) continue;
    for (std::size_t j = i + 1; j < f; ++j) {
      if (dropped[j]) continue;
      const double rij = r(i, j);
      if (!std::isfinite(rij)) {
        out.nonfinite_pairs.emplace_back(names[i], names[j]);
        continue;
      }
      if (std::abs(rij) > threshold && !always_keep.count(names[j])) {
        dropped[j] = true;
        out.drops.push_back({names[j], names[i], rij});
      }
    }
  }
  for (std::size_t j = 0; j < f; ++j)
    if (!dropped[j]) out.kept.push_back(j);
  return out;
}

FeatureSchema fit_schema(const Matrix& raw, std::span<const std::string> names, double threshold,
                         const std::set<std::string>& always_keep) {
  if (names.size() != raw.cols()) throw Error("fit_schema: name count does not match column count");
  const Standardizer st = Standardizer::fit(raw);
  const Matrix z = st.transform(raw);
  PruneResult pr = prune_correlated(z, names, threshold, always_keep);
  FeatureSchema s;
  s.input_names.assign(names.begin(), names.end());
  s.threshold = threshold;
  for (std::size_t j : pr.kept) {
    s.retained.push_back(names[j]);
    s.mean.push_back(st.mean[j]);
    s.std.push_back(st.std[j]);
    s.zero_variance.push_back(st.zero_variance[j]);
  }
  s.drops = std::move(pr.drops);
  s.nonfinite_pairs = std::move(pr.nonfinite_pairs);
  return s;
}

Matrix FeatureSchema::apply(const Matrix& raw) const {
  if (raw.cols() != input_names.size())
    throw Error("feature schema expects " + std::to_string(input_names.size()) + " columns, got " +
                std::to_string(raw.cols()));
  std::vector<std::size_t> idx;
  for (const auto& name : retained)
    idx.push_back(static_cast<std::size_t>(std::find(input_names.begin(), input_names.end(), name) - input_names.begin()));
  Matrix out = raw.select_cols(idx);
  kernels::for_each_index(out.rows(), [&](std::size_t i) {
    auto row = out.row(i);
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!zero_variance[j]) row[j] = (row[j] - mean[j]) / std[j];
  });
  return out;
}

std::string FeatureSchema::hash() const {
  std::string buf;
  for (std::size_t j = 0; j < retained.size(); ++j)
    buf += retained[j] + ":" + format_exact(mean[j]) + ":" + format_exact(std[j]) + (zero_variance[j] ? ":z" : "") + ";";
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(mix64(hash_string(buf))));
  return out;
}

nlohmann::json FeatureSchema::to_json() const {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["input_names"] = input_names;
  j["threshold"] = threshold;
  nlohmann::json cols = nlohmann::json::array();
  for (std::size_t i = 0; i < retained.size(); ++i)
    cols.push_back({{"name", retained[i]}, {"mean", mean[i]}, {"std", std[i]}, {"zero_variance", bool(zero_variance[i])}});
  j["columns"] = cols;
  nlohmann::json drops_j = nlohmann::json::array();
  for (const auto& d : drops) drops_j.push_back({{"dropped", d.dropped}, {"kept", d.kept}, {"r", d.r}});
  j["pruned"] = drops_j;
  nlohmann::json nf = nlohmann::json::array();
  for (const auto& [a, b] : nonfinite_pairs) nf.push_back({a, b});
  j["nonfinite_pairs"] = nf;
  j["hash"] = hash();
  return j;
}

FeatureSchema FeatureSchema::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) throw Error("unsupported feature schema version");
    FeatureSchema s;
    s.input_names = j.at("input_names").get<std::vector<std::string>>();
    s.threshold = j.at("threshold").get<double>();
    for (const auto& c : j.at("columns")) {
      s.retained.push_back(c.at("name").get<std::string>());
      s.mean.push_back(c.at("mean").get<double>());
      s.std.push_back(c.at("std").get<double>());
      s.zero_variance.push_back(c.at("zero_variance").get<bool>());
      if (std::find(s.input_names.begin(), s.input_names.end(), s.retained.back()) == s.input_names.end())
        throw Error("retained column '" + s.retained.back() + "' is not an input column");
    }
    for (const auto& d : j.at("pruned"))
      s.drops.push_back({d.at("dropped").get<std::string>(), d.at("kept").get<std::string>(), d.at("r").get<double>()});
    for (const auto& p : j.at("nonfinite_pairs")) s.nonfinite_pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid feature schema: ") + e.what());
  }
}

void FeatureSchema::save(const std::filesystem::path& path) const { write_text_file(path, to_json().dump(2) + "\n"); }

FeatureSchema FeatureSchema::load(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

// ---- tables ----

std::vector<std::vector<std::string>> tokenize_rows(std::span<const LabeledRow> rows, const Stopwords& stopwords) {
  std::vector<std::vector<std::string>> out(rows.size());
  kernels::for_each_index(rows.size(),
                          [&](std::size_t i) { out[i] = preprocess_stage2(clean_text_stage1(rows[i].record.text), stopwords); });
  return out;
}

RawFeatures raw_features(std::span<const LabeledRow> rows, std::span<const std::vector<std::string>> tokens,
                         const EmbeddingModel& model, const ContinentTable& continents) {
  if (tokens.size() != rows.size()) throw Error("raw_features: token list count does not match row count");
  RawFeatures out;
  out.table.names = feature_names(model.dimension());
  out.table.x = Matrix(rows.size(), out.table.names.size());
  out.table.y.resize(rows.size());
  std::vector<AssembleStats> stats(rows.size());
  kernels::for_each_index(rows.size(), [&](std::size_t i) {
    const auto emb = embed_tweet(tokens[i], model);
    const auto values = assemble_features(rows[i].record, rows[i].drugs, emb, continents, &stats[i]);
    std::copy(values.begin(), values.end(), out.table.x.row(i).begin());
    out.table.y[i] = rows[i].label;
  });
  for (const auto& s : stats) out.stats.unknown_country += s.unknown_country;
  out.tokens.assign(tokens.begin(), tokens.end());
  return out;
}

void write_feature_csv(std::ostream& out, const FeatureTable& table) {
  std::vector<std::string> header = table.names;
  header.push_back("label");
  write_csv_row(out, header);
  std::vector<std::string> row(header.size());
  for (std::size_t i = 0; i < table.x.rows(); ++i) {
    for (std::size_t j = 0; j < table.names.size(); ++j) row[j] = format_exact(table.x(i, j));
    row.back() = std::to_string(table.y[i]);
    write_csv_row(out, row);
  }
}

FeatureTable parse_feature_csv(std::string_view text) {
  const CsvTable t = parse_csv(text);
  const std::size_t label_col = t.index("label");
  FeatureTable out;
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < t.header.size(); ++j)
    if (j != label_col && t.header[j] != "tweet_id") {
      out.names.push_back(t.header[j]);
      cols.push_back(j);
    }
  out.x = Matrix(t.rows.size(), cols.size());
  out.y.resize(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    const std::string where = "feature CSV line " + std::to_string(t.line_numbers[i]);
    if (row.size() != t.header.size()) throw Error(where + ": wrong field count");
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const std::string& cell = row[cols[k]];
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v))
        throw Error(where + ", column " + out.names[k] + ": invalid number '" + cell + "'");
      out.x(i, k) = v;
    }
    const std::string& lab = row[label_col];
    if (lab != "0" && lab != "1") throw Error(where + ": label must be 0 or 1");
    out.y[i] = lab == "1" ? 1 : 0;
  }
  return out;
}

FeatureTable read_feature_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_feature_csv(text);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace weakpol
