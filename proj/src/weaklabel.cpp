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

#include "weakpol/weaklabel.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "weakpol/csv.hpp"
#include "weakpol/kernels.hpp"

namespace weakpol {

SourceVerdict score_tweet(std::span<const TermMatch> matches) {
  if (matches.empty()) throw Error("score_tweet: no matches");
  SourceVerdict v;
  v.source = matches.front().source;
  for (const auto& m : matches) {
    if (m.source != v.source) throw Error("score_tweet: matches from more than one source");
    switch (m.polarity) {
      case Polarity::positive: ++v.score; break;
      case Polarity::negative: --v.score; break;
      case Polarity::context: break;
      case Polarity::uncertain: throw Error("score_tweet: uncertain term '" + m.term + "' must be filtered first");
    }
  }
  v.verdict = v.score > 0 ? Polarity::positive : v.score < 0 ? Polarity::negative : Polarity::context;
  return v;
}

std::string_view to_string(DiscardReason reason) {
  switch (reason) {
    case DiscardReason::no_drug: return "no_drug";
    case DiscardReason::uncertain: return "uncertain";
    case DiscardReason::missing_source: return "missing_source";
    case DiscardReason::context: return "context";
    case DiscardReason::discordant: return "discordant";
  }
  return "unknown";
}

Consensus consensus_label(const std::optional<SourceVerdict>& slang_verdict,
                          const std::optional<SourceVerdict>& concept_verdict) {
  if (!slang_verdict || !concept_verdict) return {std::nullopt, DiscardReason::missing_source};
  if (slang_verdict->verdict == Polarity::context || concept_verdict->verdict == Polarity::context)
    return {std::nullopt, DiscardReason::context};
  if (slang_verdict->verdict != concept_verdict->verdict) return {std::nullopt, DiscardReason::discordant};
  return {slang_verdict->verdict == Polarity::positive ? 1 : 0, std::nullopt};
}

MatchMap tag_corpus(std::span<const TweetRecord> records, const TermMatcher& matcher) {
  std::vector<std::vector<TermMatch>> hits(records.size());
  kernels::for_each_index(records.size(), [&](std::size_t i) { hits[i] = matcher.find(clean_text_stage1(records[i].text)); });
  MatchMap out;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (!hits[i].empty()) {
      auto& slot = out[records[i].id];
      slot.insert(slot.end(), hits[i].begin(), hits[i].end());
    }
  return out;
}

void FunnelReport::merge(const FunnelReport& o) {
  input += o.input;
  with_drug += o.with_drug;
  without_uncertain += o.without_uncertain;
  with_both_sources += o.with_both_sources;
  without_context += o.without_context;
  labeled += o.labeled;
  positive += o.positive;
  for (const auto& [reason, n] : o.discards) discards[reason] += n;
  for (std::size_t d = 0; d < per_drug.size(); ++d) {
    per_drug[d].labeled += o.per_drug[d].labeled;
    per_drug[d].positive += o.per_drug[d].positive;
  }
  unknown_match_ids.insert(unknown_match_ids.end(), o.unknown_match_ids.begin(), o.unknown_match_ids.end());
}

std::array<std::size_t, 6> FunnelReport::stages() const {
  return {input, with_drug, without_uncertain, with_both_sources, without_context, labeled};
}

nlohmann::json FunnelReport::to_json() const {
  nlohmann::json j;
  j["stages"] = nlohmann::json::array({
      {{"stage", "input"}, {"count", input}},
      {{"stage", "with_drug"}, {"count", with_drug}},
      {{"stage", "without_uncertain"}, {"count", without_uncertain}},
      {{"stage", "with_both_sources"}, {"count", with_both_sources}},
      {{"stage", "without_context"}, {"count", without_context}},
      {{"stage", "labeled"}, {"count", labeled}},
  });
  nlohmann::json d = nlohmann::json::object();
  for (DiscardReason r : kAllDiscardReasons) {
    auto it = discards.find(r);
    d[std::string(to_string(r))] = it == discards.end() ? 0 : it->second;
  }
  j["discards"] = d;
  j["positive"] = positive;
  j["negative"] = labeled - positive;
  j["positive_fraction"] = labeled ? static_cast<double>(positive) / static_cast<double>(labeled) : 0.0;
  nlohmann::json per = nlohmann::json::object();
  for (Drug drug : kAllDrugs) {
    const auto& b = per_drug[static_cast<std::size_t>(drug)];
    per[std::string(to_string(drug))] = {{"labeled", b.labeled}, {"positive", b.positive}};
  }
  j["per_drug"] = per;
  j["unknown_match_ids"] = unknown_match_ids;
  return j;
}

namespace {

struct Outcome {
  std::optional<DiscardReason> reason;
  LabeledExample example;
  bool has_drug = false;
  bool has_slang = false;
  bool has_concept = false;
};

const std::vector<TermMatch>* lookup(const MatchMap& m, const std::string& id) {
  auto it = m.find(id);
  return it == m.end() ? nullptr : &it->second;
}

bool any_uncertain(const std::vector<TermMatch>* m) {
  return m && std::any_of(m->begin(), m->end(), [](const TermMatch& t) { return t.polarity == Polarity::uncertain; });
}

}  // namespace

Dataset build_dataset(std::span<const TweetRecord> records, const MatchMap& slang_matches,
                      const MatchMap& concept_matches, const KeywordIndex& index) {
  std::vector<Outcome> outcomes(records.size());
  kernels::for_each_index(records.size(), [&](std::size_t i) {
    const TweetRecord& r = records[i];
    Outcome& o = outcomes[i];
    o.example.tweet_id = r.id;
    o.example.record_index = i;
    o.example.drugs = drugs_mentioned(clean_text_stage1(r.text), index);
    o.has_drug = std::find(o.example.drugs.begin(), o.example.drugs.end(), true) != o.example.drugs.end();
    if (!o.has_drug) {
      o.reason = DiscardReason::no_drug;
      return;
    }
    const auto* s = lookup(slang_matches, r.id);
    const auto* c = lookup(concept_matches, r.id);
    if (any_uncertain(s) || any_uncertain(c)) {
      o.reason = DiscardReason::uncertain;
      return;
    }
    std::optional<SourceVerdict> sv, cv;
    if (s && !s->empty()) sv = score_tweet(*s);
    if (c && !c->empty()) cv = score_tweet(*c);
    o.has_slang = sv.has_value();
    o.has_concept = cv.has_value();
    const Consensus cons = consensus_label(sv, cv);
    if (sv) o.example.slang_verdict = *sv;
    if (cv) o.example.concept_verdict = *cv;
    if (cons.reason) {
      o.reason = cons.reason;
      return;
    }
    o.example.label = *cons.label;
  });

  Dataset ds;
  FunnelReport& f = ds.funnel;
  for (DiscardReason r : kAllDiscardReasons) f.discards[r] = 0;
  std::set<std::string> ids;
  for (auto& o : outcomes) {
    ids.insert(o.example.tweet_id);
    ++f.input;
    if (o.reason) {
      ++f.discards[*o.reason];
      ds.discarded.push_back({o.example.tweet_id, *o.reason, o.example.record_index});
    }
    if (o.reason == DiscardReason::no_drug) continue;
    ++f.with_drug;
    if (o.reason == DiscardReason::uncertain) continue;
    ++f.without_uncertain;
    if (o.reason == DiscardReason::missing_source) continue;
    ++f.with_both_sources;
    if (o.reason == DiscardReason::context) continue;
    ++f.without_context;
    if (o.reason) continue;
    ++f.labeled;
    f.positive += static_cast<std::size_t>(o.example.label);
    for (std::size_t d = 0; d < 3; ++d)
      if (o.example.drugs[d]) {
        ++f.per_drug[d].labeled;
        f.per_drug[d].positive += static_cast<std::size_t>(o.example.label);
      }
    ds.examples.push_back(std::move(o.example));
  }
  for (const MatchMap* m : {&slang_matches, &concept_matches})
    for (const auto& [id, _] : *m)
      if (!ids.count(id)) f.unknown_match_ids.push_back(id);
  std::sort(f.unknown_match_ids.begin(), f.unknown_match_ids.end());
  f.unknown_match_ids.erase(std::unique(f.unknown_match_ids.begin(), f.unknown_match_ids.end()),
                            f.unknown_match_ids.end());
  return ds;
}

namespace {

const std::array<std::string, 7>& labeled_prefix_columns() {
  static const std::array<std::string, 7> cols{"tweet_id",         "label",          "slang_score",    "concept_score",
                                               "mentions_ecstasy", "mentions_ghb", "mentions_2cb"};
  return cols;
}

}  // namespace

void write_labeled_csv(std::ostream& out, const Dataset& dataset, std::span<const TweetRecord> records) {
  const auto& corpus_cols = corpus_csv_columns();
  std::vector<std::string> header(labeled_prefix_columns().begin(), labeled_prefix_columns().end());
  header.insert(header.end(), corpus_cols.begin() + 1, corpus_cols.end());
  write_csv_row(out, header);
  for (const auto& ex : dataset.examples) {
    if (ex.record_index >= records.size() || records[ex.record_index].id != ex.tweet_id)
      throw Error("write_labeled_csv: record index mismatch for tweet " + ex.tweet_id);
    std::vector<std::string> row{ex.tweet_id,
                                 std::to_string(ex.label),
                                 std::to_string(ex.slang_verdict.score),
                                 std::to_string(ex.concept_verdict.score),
                                 ex.drugs[0] ? "1" : "0",
                                 ex.drugs[1] ? "1" : "0",
                                 ex.drugs[2] ? "1" : "0"};
    auto fields = corpus_csv_fields(records[ex.record_index]);
    row.insert(row.end(), fields.begin() + 1, fields.end());
    write_csv_row(out, row);
  }
}

std::vector<LabeledRow> parse_labeled_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  for (const auto& c : labeled_prefix_columns()) table.index(c);
  std::vector<std::string> rec_header = table.header;
  const std::size_t id_col = table.index("tweet_id");
  rec_header[id_col] = "id";
  auto parse_int = [](const std::string& s, const char* what) -> long long {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (s.empty() || pos != s.size()) throw Error(std::string("invalid ") + what + " '" + s + "'");
    return v;
  };
  std::vector<LabeledRow> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    try {
      if (row.size() != table.header.size())
        throw Error("expected " + std::to_string(table.header.size()) + " fields, got " + std::to_string(row.size()));
      LabeledRow lr;
      lr.record = corpus_record_from_fields(rec_header, row);
      const long long label = parse_int(row[table.index("label")], "label");
      if (label != 0 && label != 1) throw Error("label must be 0 or 1");
      lr.label = static_cast<int>(label);
      lr.slang_score = parse_int(row[table.index("slang_score")], "slang_score");
      lr.concept_score = parse_int(row[table.index("concept_score")], "concept_score");
      lr.drugs[0] = parse_int(row[table.index("mentions_ecstasy")], "mentions_ecstasy") != 0;
      lr.drugs[1] = parse_int(row[table.index("mentions_ghb")], "mentions_ghb") != 0;
      lr.drugs[2] = parse_int(row[table.index("mentions_2cb")], "mentions_2cb") != 0;
      out.push_back(std::move(lr));
    } catch (const Error& e) {
      throw Error("labeled CSV line " + std::to_string(table.line_numbers[r]) + ": " + e.what());
    }
  }
  return out;
}

std::vector<LabeledRow> read_labeled_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_labeled_csv(text);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace weakpol
