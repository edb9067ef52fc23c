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

#include "weakpol/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "weakpol/csv.hpp"
#include "weakpol/kernels.hpp"
#include "weakpol/resources.hpp"

namespace weakpol {

using nlohmann::json;

std::string_view to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::original: return "original";
    case ReferenceKind::reply: return "reply";
    case ReferenceKind::retweet: return "retweet";
    case ReferenceKind::quote: return "quote";
  }
  return "?";
}

std::optional<ReferenceKind> parse_reference_kind(std::string_view name) {
  if (name == "original") return ReferenceKind::original;
  if (name == "reply") return ReferenceKind::reply;
  if (name == "retweet") return ReferenceKind::retweet;
  if (name == "quote") return ReferenceKind::quote;
  return std::nullopt;
}

json IngestReport::to_json() const {
  json skipped_json = json::array();
  for (const auto& [line, reason] : skipped) skipped_json.push_back({{"line", line}, {"reason", reason}});
  return {{"lines", lines},
          {"parsed", parsed},
          {"duplicates", duplicates},
          {"unknown_reference_types", unknown_reference_types},
          {"malformed", malformed},
          {"skipped", skipped_json}};
}

ReferenceKind classify_reference(std::span<const std::string> types, std::size_t* unknown) {
  bool retweet = false, quote = false, reply = false;
  for (const auto& t : types) {
    if (t == "retweeted") retweet = true;
    else if (t == "quoted") quote = true;
    else if (t == "replied_to") reply = true;
    else if (unknown) ++*unknown;
  }
  if (retweet) return ReferenceKind::retweet;
  if (quote) return ReferenceKind::quote;
  if (reply) return ReferenceKind::reply;
  return ReferenceKind::original;
}

namespace {

struct FieldError {
  std::string reason;
};

std::string id_string(const json& v, const char* what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  throw FieldError{std::string(what) + " must be a string or integer"};
}

std::int64_t count_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return 0;
  if (!it->is_number_integer()) throw FieldError{std::string(key) + " must be an integer"};
  const auto v = it->get<std::int64_t>();
  if (v < 0) throw FieldError{std::string(key) + " is negative"};
  return v;
}

bool present(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return false;
  if (it->is_array() || it->is_string()) return !it->empty();
  return true;
}

TweetRecord record_from_json(const json& obj, std::size_t& unknown_refs) {
  TweetRecord r;
  auto id = obj.find("id");
  if (id == obj.end() || id->is_null()) throw FieldError{"missing id"};
  r.id = id_string(*id, "id");
  if (r.id.empty()) throw FieldError{"missing id"};
  auto text = obj.find("text");
  if (text == obj.end() || !text->is_string()) throw FieldError{"missing text"};
  r.text = text->get<std::string>();
  if (auto it = obj.find("created_at"); it != obj.end() && it->is_string()) r.created_at = it->get<std::string>();
  if (auto it = obj.find("author_id"); it != obj.end() && !it->is_null()) r.author_id = id_string(*it, "author_id");
  if (auto it = obj.find("public_metrics"); it != obj.end() && it->is_object()) {
    r.retweet_count = count_field(*it, "retweet_count");
    r.reply_count = count_field(*it, "reply_count");
    r.like_count = count_field(*it, "like_count");
    r.quote_count = count_field(*it, "quote_count");
  }
  r.has_media = present(obj, "attachments");
  if (auto it = obj.find("entities"); it != obj.end() && it->is_object()) r.has_mention = present(*it, "mentions");
  if (auto it = obj.find("referenced_tweets"); it != obj.end() && it->is_array()) {
    std::vector<std::string> types;
    for (const auto& ref : *it)
      if (ref.is_object() && ref.contains("type") && ref["type"].is_string()) types.push_back(ref["type"].get<std::string>());
    r.reference_kind = classify_reference(types, &unknown_refs);
  }
  if (auto it = obj.find("geo"); it != obj.end() && it->is_object()) {
    if (auto cc = it->find("country_code"); cc != it->end() && cc->is_string() && !cc->get<std::string>().empty())
      r.country_code = ascii_upper(cc->get<std::string>());
  }
  if (auto it = obj.find("user"); it != obj.end() && it->is_object()) {
    const json& u = *it;
    if (auto v = u.find("verified"); v != u.end() && v->is_boolean()) r.user.verified = v->get<bool>();
    r.user.location_present = present(u, "location");
    if (auto pm = u.find("public_metrics"); pm != u.end() && pm->is_object()) {
      r.user.followers = count_field(*pm, "followers_count");
      r.user.following = count_field(*pm, "following_count");
      r.user.tweet_count = count_field(*pm, "tweet_count");
      r.user.listed_count = count_field(*pm, "listed_count");
    }
  }
  return r;
}

}  // namespace

IngestResult ingest_jsonl(std::istream& in, bool dedupe) {
  IngestResult result;
  auto& report = result.report;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++report.lines;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      report.malformed.push_back(line_no);
      continue;
    }
    TweetRecord record;
    try {
      record = record_from_json(obj, report.unknown_reference_types);
    } catch (const FieldError& e) {
      report.skipped.emplace_back(line_no, e.reason);
      continue;
    }
    if (!seen.insert(record.id).second) {
      ++report.duplicates;
      if (dedupe) continue;
    }
    result.records.push_back(std::move(record));
    ++report.parsed;
  }
  if (in.bad()) throw IoError("error while reading JSONL input");
  return result;
}

IngestResult ingest_jsonl(const std::filesystem::path& path, bool dedupe) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return ingest_jsonl(in, dedupe);
}

json to_json(const TweetRecord& r) {
  json obj = {{"id", r.id},
              {"text", r.text},
              {"created_at", r.created_at},
              {"author_id", r.author_id},
              {"public_metrics",
               {{"retweet_count", r.retweet_count},
                {"reply_count", r.reply_count},
                {"like_count", r.like_count},
                {"quote_count", r.quote_count}}}};
  if (r.has_media) obj["attachments"] = {{"media_keys", json::array({"media"})}};
  if (r.has_mention) obj["entities"] = {{"mentions", json::array({json::object()})}};
  switch (r.reference_kind) {
    case ReferenceKind::original: break;
    case ReferenceKind::reply: obj["referenced_tweets"] = json::array({{{"type", "replied_to"}}}); break;
    case ReferenceKind::retweet: obj["referenced_tweets"] = json::array({{{"type", "retweeted"}}}); break;
    case ReferenceKind::quote: obj["referenced_tweets"] = json::array({{{"type", "quoted"}}}); break;
  }
  if (r.country_code) obj["geo"] = {{"country_code", *r.country_code}};
  json user = {{"verified", r.user.verified},
               {"public_metrics",
                {{"followers_count", r.user.followers},
                 {"following_count", r.user.following},
                 {"tweet_count", r.user.tweet_count},
                 {"listed_count", r.user.listed_count}}}};
  if (r.user.location_present) user["location"] = "present";
  obj["user"] = std::move(user);
  return obj;
}

void write_jsonl(std::ostream& out, std::span<const TweetRecord> records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

const std::vector<std::string>& corpus_csv_columns() {
  static const std::vector<std::string> cols{
      "id", "created_at", "author_id", "text", "like_count", "retweet_count", "reply_count", "quote_count",
      "has_media", "has_mention", "reference_kind", "country_code", "user_verified", "user_followers",
      "user_following", "user_tweet_count", "user_listed_count", "user_location"};
  return cols;
}

std::vector<std::string> corpus_csv_fields(const TweetRecord& r) {
  auto b = [](bool v) { return std::string(v ? "1" : "0"); };
  return {r.id,
          r.created_at,
          r.author_id,
          r.text,
          std::to_string(r.like_count),
          std::to_string(r.retweet_count),
          std::to_string(r.reply_count),
          std::to_string(r.quote_count),
          b(r.has_media),
          b(r.has_mention),
          std::string(to_string(r.reference_kind)),
          r.country_code.value_or(""),
          b(r.user.verified),
          std::to_string(r.user.followers),
          std::to_string(r.user.following),
          std::to_string(r.user.tweet_count),
          std::to_string(r.user.listed_count),
          b(r.user.location_present)};
}

namespace {

std::int64_t parse_count(const std::string& s, const char* column) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 0) throw Error(std::string("invalid value '") + s + "' in column " + column);
  return v;
}

bool parse_flag(const std::string& s, const char* column) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false" || s.empty()) return false;
  throw Error(std::string("invalid flag '") + s + "' in column " + column);
}

}  // namespace

TweetRecord corpus_record_from_fields(const std::vector<std::string>& header, const std::vector<std::string>& row) {
  auto get = [&](const char* name) -> const std::string& {
    static const std::string empty;
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i < row.size() ? row[i] : empty;
    return empty;
  };
  TweetRecord r;
  r.id = get("id");
  if (r.id.empty()) r.id = get("tweet_id");
  if (r.id.empty()) throw Error("corpus row without id");
  r.text = get("text");
  r.created_at = get("created_at");
  r.author_id = get("author_id");
  r.like_count = parse_count(get("like_count").empty() ? "0" : get("like_count"), "like_count");
  r.retweet_count = parse_count(get("retweet_count").empty() ? "0" : get("retweet_count"), "retweet_count");
  r.reply_count = parse_count(get("reply_count").empty() ? "0" : get("reply_count"), "reply_count");
  r.quote_count = parse_count(get("quote_count").empty() ? "0" : get("quote_count"), "quote_count");
  r.has_media = parse_flag(get("has_media"), "has_media");
  r.has_mention = parse_flag(get("has_mention"), "has_mention");
  const auto& kind = get("reference_kind");
  if (!kind.empty()) {
    auto k = parse_reference_kind(kind);
    if (!k) throw Error("invalid reference_kind '" + kind + "'");
    r.reference_kind = *k;
  }
  if (const auto& cc = get("country_code"); !cc.empty()) r.country_code = ascii_upper(cc);
  r.user.verified = parse_flag(get("user_verified"), "user_verified");
  r.user.followers = parse_count(get("user_followers").empty() ? "0" : get("user_followers"), "user_followers");
  r.user.following = parse_count(get("user_following").empty() ? "0" : get("user_following"), "user_following");
  r.user.tweet_count = parse_count(get("user_tweet_count").empty() ? "0" : get("user_tweet_count"), "user_tweet_count");
  r.user.listed_count =
      parse_count(get("user_listed_count").empty() ? "0" : get("user_listed_count"), "user_listed_count");
  r.user.location_present = parse_flag(get("user_location"), "user_location");
  return r;
}

void write_corpus_csv(std::ostream& out, std::span<const TweetRecord> records) {
  write_csv_row(out, corpus_csv_columns());
  for (const auto& r : records) write_csv_row(out, corpus_csv_fields(r));
}

std::vector<TweetRecord> read_corpus_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  std::vector<TweetRecord> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    try {
      out.push_back(corpus_record_from_fields(table.header, table.rows[i]));
    } catch (const Error& e) {
      throw Error(path.string() + " line " + std::to_string(table.line_numbers[i]) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TweetRecord> load_corpus(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") return ingest_jsonl(path, true).records;
  return read_corpus_csv(path);
}

bool is_emoji(char32_t cp) {
  return (cp >= 0x1F600 && cp <= 0x1F64F) ||  // emoticons
         (cp >= 0x1F300 && cp <= 0x1F5FF) ||  // misc symbols and pictographs
         (cp >= 0x1F680 && cp <= 0x1F6FF) ||  // transport and map
         (cp >= 0x1F900 && cp <= 0x1F9FF) ||  // supplemental symbols and pictographs
         (cp >= 0x2700 && cp <= 0x27BF) ||    // dingbats
         (cp >= 0x2600 && cp <= 0x26FF) ||    // misc symbols
         (cp >= 0xFE00 && cp <= 0xFE0F) ||    // variation selectors
         cp == 0x200D;                        // zero-width joiner
}

std::string clean_text_stage1(std::string_view text) {
  std::u32string cps = decode_utf8(text);
  for (char32_t& cp : cps) {
    if (is_emoji(cp)) cp = U' ';
    else if (cp >= U'A' && cp <= U'Z') cp += 32;
    else if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) cp += 32;  // Latin-1 capitals
  }
  const std::string lowered = encode_utf8(cps);
  std::string out;
  out.reserve(lowered.size());
  for (std::string_view token : split_whitespace(lowered)) {
    if (token.front() == '#') continue;  // hashtag
    std::string t;
    t.reserve(token.size());
    for (char c : token)
      if (c != '#') t.push_back(c);
    if (t.empty()) continue;
    if (t.find("http") != std::string::npos || t.find("www.") != std::string::npos) continue;  // link
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::vector<DrugQuery> parse_drug_queries(std::string_view csv_text) {
  const CsvTable table = parse_csv(csv_text);
  const std::size_t drug_col = table.index("drug");
  const std::size_t kw_col = table.index("keyword");
  std::vector<DrugQuery> queries;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row.size() <= std::max(drug_col, kw_col)) throw Error("keyword CSV: short row on line " + std::to_string(table.line_numbers[i]));
    auto drug = parse_drug(row[drug_col]);
    if (!drug) throw Error("keyword CSV: unknown drug '" + row[drug_col] + "'");
    auto it = std::find_if(queries.begin(), queries.end(), [&](const DrugQuery& q) { return q.drug == *drug; });
    if (it == queries.end()) {
      queries.push_back({*drug, {}});
      it = queries.end() - 1;
    }
    it->keywords.push_back(row[kw_col]);
  }
  return queries;
}

const std::vector<DrugQuery>& default_drug_queries() {
  static const std::vector<DrugQuery> queries = parse_drug_queries(resources::drug_keywords_csv());
  return queries;
}

const DrugQuery& default_query(Drug drug) {
  for (const auto& q : default_drug_queries())
    if (q.drug == drug) return q;
  throw Error("no default keyword list for drug");
}

KeywordIndex::KeywordIndex(std::span<const DrugQuery> queries) {
  std::vector<std::string> patterns;
  for (const auto& q : queries) {
    for (const auto& kw : q.keywords) {
      std::string norm = clean_text_stage1(kw);
      if (norm.empty()) continue;
      auto it = std::find(patterns.begin(), patterns.end(), norm);
      std::size_t idx;
      if (it == patterns.end()) {
        idx = patterns.size();
        patterns.push_back(norm);
        owners_.emplace_back();
      } else {
        idx = static_cast<std::size_t>(it - patterns.begin());
      }
      owners_[idx].push_back({q.drug, kw});
    }
  }
  keywords_ = PhraseMatcher(std::move(patterns));
  usage_ = PhraseMatcher(std::vector<std::string>(kUsageTerms.begin(), kUsageTerms.end()));
}

const KeywordIndex& KeywordIndex::defaults() {
  static const KeywordIndex index(default_drug_queries());
  return index;
}

std::vector<KeywordIndex::Hit> KeywordIndex::find(std::string_view cleaned_text) const {
  std::vector<Hit> hits;
  for (const auto& h : keywords_.find_all(cleaned_text))
    for (const auto& owner : owners_[h.pattern]) hits.push_back(owner);
  return hits;
}

bool KeywordIndex::has_usage_term(std::string_view cleaned_text) const {
  return !usage_.find_all(cleaned_text).empty();
}

QueryMatch matches_drug_query(std::string_view cleaned_text, const DrugQuery& query, bool require_usage_term,
                              const KeywordIndex& index) {
  QueryMatch result;
  for (auto& hit : index.find(cleaned_text)) {
    if (hit.drug != query.drug) continue;
    if (std::find(query.keywords.begin(), query.keywords.end(), hit.keyword) == query.keywords.end()) continue;
    if (std::find(result.keywords.begin(), result.keywords.end(), hit.keyword) == result.keywords.end())
      result.keywords.push_back(std::move(hit.keyword));
  }
  result.matched = !result.keywords.empty() && (!require_usage_term || index.has_usage_term(cleaned_text));
  return result;
}

std::array<bool, 3> drugs_mentioned(std::string_view cleaned_text, const KeywordIndex& index) {
  std::array<bool, 3> out{false, false, false};
  for (const auto& hit : index.find(cleaned_text)) out[static_cast<std::size_t>(hit.drug)] = true;
  return out;
}

std::vector<TweetRecord> filter_by_drugs(std::span<const TweetRecord> records, std::span<const Drug> drugs,
                                         bool require_usage_term, const KeywordIndex& index) {
  std::vector<char> keep(records.size(), 0);
  kernels::for_each_index(records.size(), [&](std::size_t i) {
    const std::string cleaned = clean_text_stage1(records[i].text);
    const auto mentioned = drugs_mentioned(cleaned, index);
    bool any = false;
    for (Drug d : drugs) any = any || mentioned[static_cast<std::size_t>(d)];
    keep[i] = any && (!require_usage_term || index.has_usage_term(cleaned));
  });
  std::vector<TweetRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (keep[i]) out.push_back(records[i]);
  return out;
}

}  // namespace weakpol
