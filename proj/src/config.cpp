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

#include "weakpol/config.hpp"

#include <limits>
#include <sstream>

#include <toml.hpp>

#include "weakpol/common.hpp"
#include "weakpol/csv.hpp"

namespace weakpol {

namespace {

const std::pair<const char*, std::string RunConfig::*> kStrings[] = {
    {"corpus", &RunConfig::corpus},
    {"labeled", &RunConfig::labeled},
    {"slang_lexicon", &RunConfig::slang_lexicon},
    {"concept_lexicon", &RunConfig::concept_lexicon},
    {"concept_annotations", &RunConfig::concept_annotations},
    {"out_dir", &RunConfig::out_dir},
};

const std::pair<const char*, std::size_t RunConfig::*> kCounts[] = {
    {"embedding_dimension", &RunConfig::embedding_dimension},
    {"embedding_window", &RunConfig::embedding_window},
    {"embedding_min_count", &RunConfig::embedding_min_count},
    {"embedding_negatives", &RunConfig::embedding_negatives},
    {"embedding_epochs", &RunConfig::embedding_epochs},
    {"outer_folds", &RunConfig::outer_folds},
    {"inner_folds", &RunConfig::inner_folds},
    {"n_candidates", &RunConfig::n_candidates},
    {"smote_k", &RunConfig::smote_k},
    {"synth_n_tweets", &RunConfig::synth_n_tweets},
    {"synth_filler_vocab_size", &RunConfig::synth_filler_vocab_size},
};

const std::pair<const char*, double RunConfig::*> kReals[] = {
    {"vote_threshold", &RunConfig::vote_threshold},
    {"embedding_alpha", &RunConfig::embedding_alpha},
    {"embedding_min_alpha", &RunConfig::embedding_min_alpha},
    {"embedding_sample", &RunConfig::embedding_sample},
    {"correlation_threshold", &RunConfig::correlation_threshold},
    {"test_fraction", &RunConfig::test_fraction},
    {"decision_threshold", &RunConfig::decision_threshold},
    {"smote_target_ratio", &RunConfig::smote_target_ratio},
    {"synth_positive_fraction", &RunConfig::synth_positive_fraction},
    {"synth_context_term_rate", &RunConfig::synth_context_term_rate},
    {"synth_discordant_rate", &RunConfig::synth_discordant_rate},
    {"synth_missing_source_rate", &RunConfig::synth_missing_source_rate},
    {"synth_uncertain_rate", &RunConfig::synth_uncertain_rate},
    {"synth_no_drug_rate", &RunConfig::synth_no_drug_rate},
    {"synth_filler_overlap", &RunConfig::synth_filler_overlap},
};

const std::pair<const char*, std::vector<std::string> RunConfig::*> kLists[] = {
    {"algorithms", &RunConfig::algorithms},
    {"strategies", &RunConfig::strategies},
};

std::string toml_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string toml_real(double v) {
  std::string s = format_exact(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

void RunConfig::validate() const {
  (void)VoteThreshold(vote_threshold);
  if (jobs < 1) throw Error("config: jobs must be at least 1");
  if (seed > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
    throw Error("config: seed must fit in a signed 64-bit integer");
  if (embedding_dimension == 0 || embedding_window == 0 || embedding_min_count == 0 || embedding_epochs == 0)
    throw Error("config: embedding sizes must be positive");
  if (!(embedding_alpha > 0) || !(embedding_min_alpha >= 0) || embedding_min_alpha > embedding_alpha)
    throw Error("config: need 0 <= embedding_min_alpha <= embedding_alpha and embedding_alpha > 0");
  if (!(correlation_threshold > 0 && correlation_threshold <= 1))
    throw Error("config: correlation_threshold must lie in (0, 1]");
  plan().validate();
  synth_config().validate();
}

std::vector<Algorithm> RunConfig::algorithm_list() const {
  std::vector<Algorithm> out;
  for (const auto& name : algorithms) {
    auto a = parse_algorithm(name);
    if (!a) throw Error("config: unknown algorithm '" + name + "'");
    if (std::find(out.begin(), out.end(), *a) == out.end()) out.push_back(*a);
  }
  return out;
}

std::vector<StrategyKind> RunConfig::strategy_list() const {
  std::vector<StrategyKind> out;
  for (const auto& name : strategies) {
    auto s = parse_strategy(name);
    if (!s) throw Error("config: unknown strategy '" + name + "'");
    if (std::find(out.begin(), out.end(), *s) == out.end()) out.push_back(*s);
  }
  return out;
}

EmbeddingConfig RunConfig::embedding_config() const {
  EmbeddingConfig e;
  e.dimension = embedding_dimension;
  e.window = embedding_window;
  e.min_count = embedding_min_count;
  e.negatives = embedding_negatives;
  e.epochs = embedding_epochs;
  e.alpha = embedding_alpha;
  e.min_alpha = embedding_min_alpha;
  e.sample = embedding_sample;
  e.seed = derive_seed(seed, {hash_string("embedding")});
  return e;
}

FeaturizeOptions RunConfig::featurize_options() const {
  FeaturizeOptions f;
  f.embedding = embedding_config();
  f.correlation_threshold = correlation_threshold;
  return f;
}

ExperimentPlan RunConfig::plan() const {
  ExperimentPlan p;
  p.split.test_fraction = test_fraction;
  p.split.outer_folds = outer_folds;
  p.split.inner_folds = inner_folds;
  p.split.seed = seed;
  p.n_candidates = n_candidates;
  p.threshold = decision_threshold;
  p.smote_k = smote_k;
  p.smote_target_ratio = smote_target_ratio;
  p.algorithms = algorithm_list();
  p.strategies = strategy_list();
  return p;
}

SynthConfig RunConfig::synth_config() const {
  SynthConfig s;
  s.n_tweets = synth_n_tweets;
  s.positive_fraction = synth_positive_fraction;
  s.context_term_rate = synth_context_term_rate;
  s.discordant_rate = synth_discordant_rate;
  s.missing_source_rate = synth_missing_source_rate;
  s.uncertain_rate = synth_uncertain_rate;
  s.no_drug_rate = synth_no_drug_rate;
  s.filler_vocab_size = synth_filler_vocab_size;
  s.filler_overlap = synth_filler_overlap;
  s.seed = seed;
  return s;
}

std::string RunConfig::to_toml() const {
  std::ostringstream o;
  o << "seed = " << seed << "\n";
  o << "jobs = " << jobs << "\n";
  for (const auto& [k, m] : kStrings) o << k << " = " << toml_string(this->*m) << "\n";
  for (const auto& [k, m] : kReals) o << k << " = " << toml_real(this->*m) << "\n";
  for (const auto& [k, m] : kCounts) o << k << " = " << this->*m << "\n";
  for (const auto& [k, m] : kLists) {
    o << k << " = [";
    const auto& v = this->*m;
    for (std::size_t i = 0; i < v.size(); ++i) o << (i ? ", " : "") << toml_string(v[i]);
    o << "]\n";
  }
  return o.str();
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["jobs"] = jobs;
  for (const auto& [k, m] : kStrings) j[k] = this->*m;
  for (const auto& [k, m] : kReals) j[k] = this->*m;
  for (const auto& [k, m] : kCounts) j[k] = this->*m;
  for (const auto& [k, m] : kLists) j[k] = this->*m;
  return j;
}

RunConfig parse_run_config(std::string_view toml_text) {
  toml::table tbl;
  try {
    tbl = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream o;
    o << "config: " << e.description() << " at line " << e.source().begin.line;
    throw Error(o.str());
  }
  RunConfig c;
  auto integer = [](const toml::node& n, const std::string& key) -> std::int64_t {
    const auto v = n.value<std::int64_t>();
    if (!n.is_integer() || !v) throw Error("config: '" + key + "' must be an integer");
    return *v;
  };
  for (const auto& [key_node, node] : tbl) {
    const std::string key(key_node.str());
    bool known = false;
    if (key == "seed") {
      const auto v = integer(node, key);
      if (v < 0) throw Error("config: 'seed' must be non-negative");
      c.seed = static_cast<std::uint64_t>(v);
      known = true;
    } else if (key == "jobs") {
      const auto v = integer(node, key);
      if (v < 1 || v > 1024) throw Error("config: 'jobs' must lie in [1, 1024]");
      c.jobs = static_cast<int>(v);
      known = true;
    }
    for (const auto& [k, m] : kStrings)
      if (key == k) {
        if (!node.is_string()) throw Error("config: '" + key + "' must be a string");
        c.*m = *node.value<std::string>();
        known = true;
      }
    for (const auto& [k, m] : kReals)
      if (key == k) {
        if (!node.is_number()) throw Error("config: '" + key + "' must be a number");
        c.*m = *node.value<double>();
        known = true;
      }
    for (const auto& [k, m] : kCounts)
      if (key == k) {
        const auto v = integer(node, key);
        if (v < 0) throw Error("config: '" + key + "' must be non-negative");
        c.*m = static_cast<std::size_t>(v);
        known = true;
      }
    for (const auto& [k, m] : kLists)
      if (key == k) {
        const auto* arr = node.as_array();
        if (!arr) throw Error("config: '" + key + "' must be an array of strings");
        std::vector<std::string> v;
        for (const auto& item : *arr) {
          if (!item.is_string()) throw Error("config: '" + key + "' must be an array of strings");
          v.push_back(*item.value<std::string>());
        }
        c.*m = std::move(v);
        known = true;
      }
    if (!known) throw Error("config: unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  try {
    return parse_run_config(read_text_file(path));
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace weakpol
