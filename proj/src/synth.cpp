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

#include "weakpol/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "weakpol/common.hpp"
#include "weakpol/csv.hpp"
#include "weakpol/features.hpp"
#include "weakpol/rng.hpp"

namespace weakpol {

void SynthConfig::validate() const {
  if (n_tweets < 10) throw Error("synth: n_tweets must be at least 10");
  const std::pair<const char*, double> fractions[] = {
      {"positive_fraction", positive_fraction}, {"context_term_rate", context_term_rate},
      {"discordant_rate", discordant_rate},     {"missing_source_rate", missing_source_rate},
      {"uncertain_rate", uncertain_rate},       {"no_drug_rate", no_drug_rate},
      {"filler_overlap", filler_overlap}};
  for (const auto& [name, v] : fractions)
    if (!(v >= 0.0 && v <= 1.0)) throw Error(std::string("synth: ") + name + " must lie in [0, 1]");
  if (context_term_rate + discordant_rate + missing_source_rate + uncertain_rate + no_drug_rate > 1.0)
    throw Error("synth: discard rates sum above 1");
  if (filler_vocab_size < 3) throw Error("synth: filler_vocab_size must be at least 3");
  if (min_filler == 0 || min_filler > max_filler) throw Error("synth: need 0 < min_filler <= max_filler");
}

std::string Outcome::to_string() const {
  if (label) return std::to_string(*label);
  return reason ? std::string(weakpol::to_string(*reason)) : "?";
}

Outcome oracle_label(const PlantedTerms& terms) {
  if (!terms.has_drug) return {std::nullopt, DiscardReason::no_drug};
  auto count = [](const std::vector<Polarity>& v, Polarity p) {
    return std::count(v.begin(), v.end(), p);
  };
  if (count(terms.slang, Polarity::uncertain) + count(terms.concept_terms, Polarity::uncertain) > 0)
    return {std::nullopt, DiscardReason::uncertain};
  if (terms.slang.empty() || terms.concept_terms.empty()) return {std::nullopt, DiscardReason::missing_source};
  auto lean = [&](const std::vector<Polarity>& v) {
    const auto up = count(v, Polarity::positive), down = count(v, Polarity::negative);
    return up > down ? 1 : up < down ? -1 : 0;
  };
  const int a = lean(terms.slang), b = lean(terms.concept_terms);
  if (a == 0 || b == 0) return {std::nullopt, DiscardReason::context};
  if (a != b) return {std::nullopt, DiscardReason::discordant};
  return {a > 0 ? 1 : 0, std::nullopt};
}

namespace {

enum class Category { positive, negative, context, discordant, missing, uncertain, no_drug };

struct TermPool {
  std::vector<std::string> positive, negative, context, uncertain;
  const std::vector<std::string>& of(Polarity p) const {
    switch (p) {
      case Polarity::positive: return positive;
      case Polarity::negative: return negative;
      case Polarity::context: return context;
      case Polarity::uncertain: return uncertain;
    }
    return context;
  }
};

class WordMaker {
 public:
  explicit WordMaker(std::uint64_t seed) : rng_(seed) {}

  std::string make() {
    static constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s",
                                                   "t", "v", "z", "br", "dr", "gl", "kr", "pl", "st", "tr"};
    static constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
    static constexpr std::string_view kCodas[] = {"", "", "n", "r", "s", "x", "l"};
    for (;;) {
      std::string w;
      const auto syllables = rng_.between(2, 3);
      for (std::int64_t s = 0; s < syllables; ++s) {
        w += kOnsets[rng_.below(std::size(kOnsets))];
        w += kVowels[rng_.below(std::size(kVowels))];
      }
      w += kCodas[rng_.below(std::size(kCodas))];
      if (acceptable(w)) {
        used_.insert(w);
        return w;
      }
    }
  }

 private:
  bool acceptable(const std::string& w) const {
    if (used_.count(w) || default_stopwords().count(w)) return false;
    const auto d = drugs_mentioned(w);
    if (d[0] || d[1] || d[2]) return false;
    return std::find(kUsageTerms.begin(), kUsageTerms.end(), w) == kUsageTerms.end();
  }

  Rng rng_;
  std::set<std::string> used_;
};

std::vector<std::string> make_words(WordMaker& maker, std::size_t n, bool allow_phrases, Rng& rng) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string w = maker.make();
    if (allow_phrases && rng.bernoulli(0.3)) w += " " + maker.make();
    out.push_back(std::move(w));
  }
  return out;
}

TermPool make_pool(WordMaker& maker, bool phrases, Rng& rng) {
  TermPool p;
  p.positive = make_words(maker, 24, phrases, rng);
  p.negative = make_words(maker, 24, phrases, rng);
  p.context = make_words(maker, 8, phrases, rng);
  p.uncertain = make_words(maker, 6, phrases, rng);
  return p;
}

std::vector<AnnotatorVote> votes_for(Polarity p, Rng& rng) {
  std::vector<Polarity> v;
  if (p == Polarity::uncertain) {
    v = {Polarity::positive, Polarity::negative, Polarity::context};
  } else {
    static constexpr Polarity kAll[] = {Polarity::positive, Polarity::negative, Polarity::context};
    v = {p, p, rng.bernoulli(0.5) ? p : kAll[rng.below(3)]};
  }
  rng.shuffle(std::span<Polarity>(v));
  return {{"a1", v[0]}, {"a2", v[1]}, {"a3", v[2]}};
}

std::vector<LexiconEntry> lexicon_of(const TermPool& pool, Source source, Rng& rng) {
  std::vector<LexiconEntry> out;
  for (Polarity p : {Polarity::positive, Polarity::negative, Polarity::context, Polarity::uncertain})
    for (const auto& t : pool.of(p)) {
      LexiconEntry e{t, std::nullopt, source, votes_for(p, rng)};
      const auto d = rng.below(4);
      if (d < 3) e.drug = kAllDrugs[d];
      out.push_back(std::move(e));
    }
  return out;
}

// Polarity list whose net sign is `sign`.
std::vector<Polarity> compose(int sign, Rng& rng) {
  std::vector<Polarity> v;
  if (sign == 0) {
    if (rng.bernoulli(0.5)) v = {Polarity::context};
    else v = {Polarity::positive, Polarity::negative};
  } else {
    const Polarity major = sign > 0 ? Polarity::positive : Polarity::negative;
    const Polarity minor = sign > 0 ? Polarity::negative : Polarity::positive;
    v = {major};
    if (rng.bernoulli(0.5)) v.insert(v.end(), {major, minor});
  }
  if (rng.bernoulli(0.25)) v.push_back(Polarity::context);
  rng.shuffle(std::span<Polarity>(v));
  return v;
}

std::int64_t log_uniform_count(Rng& rng, double max) {
  return static_cast<std::int64_t>(std::floor(std::exp(rng.uniform() * std::log(max + 1.0)))) - 1;
}

std::string timestamp(std::size_t i) {
  // Minutes after 2021-06-01T00:00Z, within 30-day months.
  const std::size_t minutes = i * 7;
  const std::size_t day = minutes / 1440, hour = (minutes / 60) % 24, minute = minutes % 60;
  const std::size_t month = 6 + (day / 30) % 6, dom = 1 + day % 30;
  char buf[40];
  std::snprintf(buf, sizeof buf, "2021-%02zu-%02zuT%02zu:%02zu:00.000Z", month, dom, hour, minute);
  return buf;
}

std::vector<std::string> single_word_keywords(Drug drug) {
  std::vector<std::string> out;
  for (const auto& k : default_query(drug).keywords)
    if (std::all_of(k.begin(), k.end(), [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }))
      out.push_back(k);
  return out;
}

}  // namespace

SynthCorpus generate_corpus(const SynthConfig& config) {
  config.validate();
  SynthCorpus out;
  out.config = config;
  const std::size_t n = config.n_tweets;

  Rng lex_rng(derive_seed(config.seed, {hash_string("lexicon")}));
  WordMaker maker(derive_seed(config.seed, {hash_string("words")}));
  const TermPool slang = make_pool(maker, false, lex_rng);
  const TermPool concepts = make_pool(maker, true, lex_rng);
  out.slang_lexicon = lexicon_of(slang, Source::slang, lex_rng);
  out.concept_lexicon = lexicon_of(concepts, Source::concept_, lex_rng);
  std::map<std::string, std::string> concept_ids;
  for (std::size_t i = 0; i < out.concept_lexicon.size(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "C%07zu", 1000 + i * 37);
    concept_ids[out.concept_lexicon[i].term] = buf;
  }

  const std::size_t third = config.filler_vocab_size / 3;
  const std::vector<std::string> shared = make_words(maker, config.filler_vocab_size - 2 * third, false, lex_rng);
  const std::array<std::vector<std::string>, 2> by_class{make_words(maker, third, false, lex_rng),
                                                        make_words(maker, third, false, lex_rng)};
  std::array<std::vector<std::string>, 3> keywords;
  for (Drug d : kAllDrugs) keywords[static_cast<std::size_t>(d)] = single_word_keywords(d);

  // Exact category counts, then a seeded shuffle.
  auto part = [&](double r) { return static_cast<std::size_t>(std::floor(r * static_cast<double>(n))); };
  const std::size_t n_context = part(config.context_term_rate), n_disc = part(config.discordant_rate),
                    n_missing = part(config.missing_source_rate), n_unc = part(config.uncertain_rate),
                    n_nodrug = part(config.no_drug_rate);
  const std::size_t n_labeled = n - n_context - n_disc - n_missing - n_unc - n_nodrug;
  const auto n_pos = static_cast<std::size_t>(std::llround(config.positive_fraction * static_cast<double>(n_labeled)));
  std::vector<Category> cats;
  cats.insert(cats.end(), n_pos, Category::positive);
  cats.insert(cats.end(), n_labeled - n_pos, Category::negative);
  cats.insert(cats.end(), n_context, Category::context);
  cats.insert(cats.end(), n_disc, Category::discordant);
  cats.insert(cats.end(), n_missing, Category::missing);
  cats.insert(cats.end(), n_unc, Category::uncertain);
  cats.insert(cats.end(), n_nodrug, Category::no_drug);
  Rng rng(derive_seed(config.seed, {hash_string("tweets")}));
  rng.shuffle(std::span<Category>(cats));

  static constexpr std::string_view kCountries[] = {"US", "GB", "DE", "FR", "NL", "ES", "NG", "ZA",
                                                    "IN", "JP", "BR", "CA", "MX", "AU", "KE", "PH"};
  auto random_sign = [&] { return rng.bernoulli(0.5) ? 1 : -1; };

  for (std::size_t i = 0; i < n; ++i) {
    PlantedTerms terms;
    int filler_class = rng.bernoulli(0.5) ? 1 : 0;
    switch (cats[i]) {
      case Category::positive:
      case Category::negative: {
        const int s = cats[i] == Category::positive ? 1 : -1;
        terms.slang = compose(s, rng);
        terms.concept_terms = compose(s, rng);
        filler_class = s > 0 ? 1 : 0;
        break;
      }
      case Category::context: {
        const auto which = rng.below(3);  // slang zero, concept zero, both zero
        terms.slang = compose(which == 1 ? random_sign() : 0, rng);
        terms.concept_terms = compose(which == 0 ? random_sign() : 0, rng);
        break;
      }
      case Category::discordant: {
        const int s = random_sign();
        terms.slang = compose(s, rng);
        terms.concept_terms = compose(-s, rng);
        break;
      }
      case Category::missing: {
        const auto which = rng.below(3);  // slang only, concept only, neither
        if (which == 0) terms.slang = compose(random_sign(), rng);
        if (which == 1) terms.concept_terms = compose(random_sign(), rng);
        break;
      }
      case Category::uncertain:
      case Category::no_drug: {
        const int s = random_sign();
        terms.slang = compose(s, rng);
        terms.concept_terms = compose(s, rng);
        if (cats[i] == Category::uncertain)
          (rng.bernoulli(0.5) ? terms.slang : terms.concept_terms).push_back(Polarity::uncertain);
        else
          terms.has_drug = false;
        break;
      }
    }

    TweetRecord r;
    r.id = std::to_string(1400000000000000000ULL + i * 7919);
    r.author_id = std::to_string(900000 + rng.below(n));
    r.created_at = timestamp(i);
    std::vector<std::string> units;
    const auto n_filler = static_cast<std::size_t>(
        rng.between(static_cast<std::int64_t>(config.min_filler), static_cast<std::int64_t>(config.max_filler)));
    for (std::size_t k = 0; k < n_filler; ++k) {
      const auto& pool = rng.bernoulli(config.filler_overlap) ? shared : by_class[filler_class];
      units.push_back(pool[rng.below(pool.size())]);
    }
    if (terms.has_drug) {
      const auto& kw = keywords[rng.below(3)];
      units.push_back(kw[rng.below(kw.size())]);
    }
    for (Polarity p : terms.slang) {
      const auto& pool = slang.of(p);
      units.push_back(pool[rng.below(pool.size())]);
    }
    for (Polarity p : terms.concept_terms) {
      const auto& pool = concepts.of(p);
      const std::string& t = pool[rng.below(pool.size())];
      units.push_back(t);
      out.concept_annotations.push_back({r.id, concept_ids.at(t), t, p});
    }
    rng.shuffle(std::span<std::string>(units));
    r.has_mention = rng.bernoulli(0.3);
    r.has_media = rng.bernoulli(0.2);
    std::string text = r.has_mention ? "@user" + std::to_string(rng.below(1000)) + " " : "";
    for (std::size_t k = 0; k < units.size(); ++k) text += (k ? " " : "") + units[k];
    if (r.has_media) text += " https://t.co/" + std::to_string(rng.below(1000000));
    r.text = std::move(text);

    r.like_count = log_uniform_count(rng, 1e4);
    r.retweet_count = log_uniform_count(rng, 1e4);
    r.reply_count = log_uniform_count(rng, 1e4);
    r.quote_count = log_uniform_count(rng, 1e4);
    const double ref = rng.uniform();
    r.reference_kind = ref < 0.6    ? ReferenceKind::original
                       : ref < 0.8  ? ReferenceKind::reply
                       : ref < 0.95 ? ReferenceKind::retweet
                                    : ReferenceKind::quote;
    if (rng.bernoulli(0.5)) r.country_code = std::string(kCountries[rng.below(std::size(kCountries))]);
    r.user.verified = rng.bernoulli(0.02);
    r.user.followers = log_uniform_count(rng, 1e5);
    r.user.following = log_uniform_count(rng, 1e4);
    r.user.tweet_count = log_uniform_count(rng, 1e5);
    r.user.listed_count = log_uniform_count(rng, 1e3);
    r.user.location_present = r.country_code.has_value() || rng.bernoulli(0.2);

    out.truth.push_back({r.id, terms, oracle_label(terms)});
    out.records.push_back(std::move(r));
  }
  return out;
}

void SynthCorpus::write(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  {
    std::ostringstream o;
    write_jsonl(o, records);
    write_text_file(dir / "corpus.jsonl", o.str());
  }
  {
    std::ostringstream o;
    write_lexicon_csv(o, slang_lexicon);
    write_text_file(dir / "slang_lexicon.csv", o.str());
  }
  {
    std::ostringstream o;
    write_lexicon_csv(o, concept_lexicon);
    write_text_file(dir / "concept_lexicon.csv", o.str());
  }
  std::string s = "tweet_id,concept_id,matched_text,polarity\n";
  for (const auto& a : concept_annotations)
    s += a.tweet_id + "," + a.concept_id + "," + csv_escape(a.matched_text) + "," + std::string(to_string(a.polarity)) +
         "\n";
  write_text_file(dir / "concept_annotations.csv", s);
  s = "tweet_id,expected_label_or_reason\n";
  for (const auto& t : truth) s += t.tweet_id + "," + t.outcome.to_string() + "\n";
  write_text_file(dir / "ground_truth.csv", s);
}

}  // namespace weakpol
