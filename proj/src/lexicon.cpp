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

#include "weakpol/lexicon.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <set>

#include "weakpol/csv.hpp"

namespace weakpol {

VoteThreshold::VoteThreshold(double fraction) {
  if (!(fraction > 0.5) || fraction > 1.0)
    throw Error("vote threshold must be in (0.5, 1], got " + format_exact(fraction));
  parts_ = static_cast<unsigned long long>(std::llround(fraction * kScale));
}

Polarity consolidate_votes(std::span<const Polarity> votes, VoteThreshold threshold) {
  if (votes.empty()) throw Error("consolidate_votes: empty vote list");
  std::array<std::size_t, 3> counts{0, 0, 0};
  for (Polarity v : votes) {
    if (v == Polarity::uncertain) throw Error("consolidate_votes: 'uncertain' is not a vote");
    ++counts[static_cast<std::size_t>(v)];
  }
  for (Polarity label : {Polarity::positive, Polarity::negative, Polarity::context})
    if (threshold.reached(counts[static_cast<std::size_t>(label)], votes.size())) return label;
  return Polarity::uncertain;
}

std::vector<ConsolidatedTerm> consolidate(std::span<const LexiconEntry> entries, VoteThreshold threshold) {
  std::vector<ConsolidatedTerm> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.term.empty()) throw Error("lexicon entry with empty term");
    if (ascii_lower(e.term) != e.term) throw Error("lexicon term '" + e.term + "' is not lowercase");
    if (e.votes.empty()) throw Error("lexicon term '" + e.term + "' has no votes");
    std::set<std::string> annotators;
    std::vector<Polarity> votes;
    for (const auto& v : e.votes) {
      if (!annotators.insert(v.annotator).second)
        throw Error("lexicon term '" + e.term + "' has two votes from annotator " + v.annotator);
      votes.push_back(v.vote);
    }
    out.push_back({e.term, e.source, consolidate_votes(votes, threshold), e.drug});
  }
  return out;
}

TermMatcher build_matcher(std::span<const ConsolidatedTerm> entries) {
  if (entries.empty()) throw Error("build_matcher: empty term list");
  TermMatcher m;
  m.source_ = entries.front().source;
  std::set<std::string> seen;
  std::vector<std::string> patterns;
  for (const auto& t : entries) {
    if (t.source != m.source_) throw Error("build_matcher: terms from more than one source");
    if (t.term.empty()) throw Error("build_matcher: empty term");
    const std::string key = ascii_lower(t.term);
    if (!seen.insert(key).second)
      throw Error("build_matcher: duplicate term '" + t.term + "' for source " + std::string(to_string(t.source)));
    patterns.push_back(key);
    m.terms_.push_back(t);
  }
  m.phrases_ = PhraseMatcher(std::move(patterns));
  return m;
}

std::vector<TermMatch> TermMatcher::find(std::string_view cleaned_text) const {
  std::vector<TermMatch> out;
  for (const auto& hit : phrases_.find_all(cleaned_text)) {
    const auto& t = terms_[hit.pattern];
    out.push_back({t.term, t.source, t.polarity, hit.begin, hit.end});
  }
  return out;
}

namespace {

Polarity parse_vote(const std::string& s, std::size_t line) {
  auto p = parse_polarity(s);
  if (!p || *p == Polarity::uncertain)
    throw Error("lexicon line " + std::to_string(line) + ": invalid vote '" + s + "'");
  return *p;
}

}  // namespace

std::vector<LexiconEntry> parse_lexicon_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const std::size_t term_col = table.index("term");
  const std::size_t source_col = table.index("source");
  const auto drug_col = table.find("drug");
  std::vector<std::size_t> vote_cols;
  for (std::size_t i = 0; i < table.header.size(); ++i)
    if (table.header[i].starts_with("vote_")) vote_cols.push_back(i);
  if (vote_cols.empty()) throw Error("lexicon CSV has no vote_* columns");

  std::vector<LexiconEntry> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    auto cell = [&](std::size_t c) -> std::string { return c < row.size() ? std::string(trim(row[c])) : std::string(); };
    LexiconEntry e;
    e.term = cell(term_col);
    if (e.term.empty()) throw Error("lexicon line " + std::to_string(line) + ": empty term");
    auto source = parse_source(cell(source_col));
    if (!source) throw Error("lexicon line " + std::to_string(line) + ": invalid source '" + cell(source_col) + "'");
    e.source = *source;
    if (drug_col && !cell(*drug_col).empty()) {
      e.drug = parse_drug(cell(*drug_col));
      if (!e.drug) throw Error("lexicon line " + std::to_string(line) + ": invalid drug '" + cell(*drug_col) + "'");
    }
    for (std::size_t c : vote_cols) {
      const std::string v = cell(c);
      if (v.empty()) continue;
      e.votes.push_back({table.header[c], parse_vote(v, line)});
    }
    if (e.votes.empty()) throw Error("lexicon line " + std::to_string(line) + ": no votes");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ConsolidatedTerm> parse_consolidated_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const std::size_t term_col = table.index("term");
  const std::size_t source_col = table.index("source");
  const std::size_t polarity_col = table.index("polarity");
  const auto drug_col = table.find("drug");
  std::vector<ConsolidatedTerm> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    auto cell = [&](std::size_t c) -> std::string { return c < row.size() ? std::string(trim(row[c])) : std::string(); };
    ConsolidatedTerm t;
    t.term = cell(term_col);
    if (t.term.empty()) throw Error("lexicon line " + std::to_string(line) + ": empty term");
    auto source = parse_source(cell(source_col));
    if (!source) throw Error("lexicon line " + std::to_string(line) + ": invalid source '" + cell(source_col) + "'");
    t.source = *source;
    auto pol = parse_polarity(cell(polarity_col));
    if (!pol) throw Error("lexicon line " + std::to_string(line) + ": invalid polarity '" + cell(polarity_col) + "'");
    t.polarity = *pol;
    if (drug_col && !cell(*drug_col).empty()) t.drug = parse_drug(cell(*drug_col));
    out.push_back(std::move(t));
  }
  return out;
}

void write_lexicon_csv(std::ostream& out, std::span<const LexiconEntry> entries) {
  std::size_t n_votes = 0;
  for (const auto& e : entries) n_votes = std::max(n_votes, e.votes.size());
  std::vector<std::string> header{"term", "drug", "source"};
  for (std::size_t i = 0; i < n_votes; ++i) header.push_back("vote_" + std::to_string(i + 1));
  write_csv_row(out, header);
  for (const auto& e : entries) {
    std::vector<std::string> row{e.term, e.drug ? std::string(to_string(*e.drug)) : "", std::string(to_string(e.source))};
    for (std::size_t i = 0; i < n_votes; ++i)
      row.push_back(i < e.votes.size() ? std::string(to_string(e.votes[i].vote)) : "");
    write_csv_row(out, row);
  }
}

void write_consolidated_csv(std::ostream& out, std::span<const ConsolidatedTerm> terms) {
  write_csv_row(out, std::vector<std::string>{"term", "source", "polarity", "drug"});
  for (const auto& t : terms)
    write_csv_row(out, std::vector<std::string>{t.term, std::string(to_string(t.source)), std::string(to_string(t.polarity)),
                                                t.drug ? std::string(to_string(*t.drug)) : ""});
}

std::vector<ConsolidatedTerm> load_terms(const std::filesystem::path& path, VoteThreshold threshold) {
  const std::string text = read_text_file(path);
  try {
    const CsvTable probe = parse_csv(text.substr(0, std::min<std::size_t>(text.size(), 4096)));
    if (probe.find("polarity")) return parse_consolidated_csv(text);
    return consolidate(parse_lexicon_csv(text), threshold);
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

bool is_concept_annotation_csv(std::string_view text) {
  const auto eol = text.find('\n');
  const CsvTable probe = parse_csv(text.substr(0, eol == std::string_view::npos ? text.size() : eol + 1));
  return probe.find("tweet_id") && probe.find("matched_text");
}

ConceptAnnotationSet parse_concept_annotations(std::string_view text) {
  ConceptAnnotationSet set;
  const CsvTable table = parse_csv(text);
  if (table.header.empty()) {
    set.warnings.push_back("concept annotation file is empty");
    return set;
  }
  const std::size_t id_col = table.index("tweet_id");
  const std::size_t text_col = table.index("matched_text");
  const std::size_t pol_col = table.index("polarity");
  table.index("concept_id");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    ++set.rows;
    auto cell = [&](std::size_t c) -> std::string { return c < row.size() ? std::string(trim(row[c])) : std::string(); };
    const std::string id = cell(id_col);
    const std::string matched = ascii_lower(cell(text_col));
    auto pol = parse_polarity(cell(pol_col));
    if (id.empty()) {
      set.rejected.emplace_back(table.line_numbers[r], "empty tweet_id");
      continue;
    }
    if (!pol) {
      set.rejected.emplace_back(table.line_numbers[r], "unknown polarity '" + cell(pol_col) + "'");
      continue;
    }
    set.by_tweet[id].push_back({matched, Source::concept_, *pol, 0, 0});
  }
  if (set.rows == 0) set.warnings.push_back("concept annotation file has no rows");
  return set;
}

ConceptAnnotationSet load_concept_annotations(const std::filesystem::path& path) {
  return parse_concept_annotations(read_text_file(path));
}

}  // namespace weakpol
