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

#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "weakpol/config.hpp"
#include "weakpol/csv.hpp"
#include "weakpol/kernels.hpp"

namespace weakpol::cli {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out_dir;
};

struct Io {
  std::ostream& out;
  std::ostream& err;
};

RunConfig resolve(const Globals& g) {
  RunConfig c = g.config.empty() ? RunConfig{} : load_run_config(g.config);
  if (g.seed) c.seed = *g.seed;
  if (g.jobs) c.jobs = *g.jobs;
  if (!g.out_dir.empty()) c.out_dir = g.out_dir;
  c.validate();
  kernels::set_num_threads(c.jobs);
  return c;
}

fs::path prepare_out_dir(const RunConfig& c) {
  const fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text_file(path, j.dump(2) + "\n"); }

template <class Fn>
void write_stream(const fs::path& path, Fn fn) {
  std::ostringstream o;
  fn(o);
  write_text_file(path, o.str());
}

// ---- ingest ----

struct IngestArgs {
  std::string input;
  std::string out;
  bool dedupe = false;
  std::string filter_drugs;
  bool require_usage = false;
};

int cmd_ingest(const Globals& g, const IngestArgs& a, Io io) {
  const RunConfig c = resolve(g);
  IngestResult r = ingest_jsonl(fs::path(a.input), a.dedupe);
  std::vector<TweetRecord> records = std::move(r.records);
  nlohmann::json report = r.report.to_json();
  report["input"] = a.input;
  if (!a.filter_drugs.empty() || a.require_usage) {
    std::vector<Drug> drugs;
    for (const auto& name : split_list(a.filter_drugs)) {
      auto d = parse_drug(name);
      if (!d) throw Error("ingest: unknown drug '" + name + "'");
      drugs.push_back(*d);
    }
    if (drugs.empty()) drugs = {Drug::ecstasy, Drug::ghb, Drug::twocb};
    const std::size_t before = records.size();
    records = filter_by_drugs(records, drugs, a.require_usage);
    report["filter"] = {{"drugs", split_list(a.filter_drugs)},
                        {"require_usage_term", a.require_usage},
                        {"before", before},
                        {"retained", records.size()}};
  }
  const fs::path dir = prepare_out_dir(c);
  const fs::path out = a.out.empty() ? dir / "corpus.csv" : fs::path(a.out);
  if (out.extension() == ".jsonl")
    write_stream(out, [&](std::ostream& o) { write_jsonl(o, records); });
  else
    write_stream(out, [&](std::ostream& o) { write_corpus_csv(o, records); });
  report["written"] = records.size();
  report["output"] = out.string();
  write_json(dir / "ingest_report.json", report);
  io.out << "ingest: " << r.report.lines << " lines, " << r.report.parsed << " parsed, " << r.report.duplicates
         << " duplicates, " << r.report.malformed.size() << " malformed, " << records.size() << " written to "
         << out.string() << "\n";
  return kExitOk;
}

// ---- label ----

struct LabelArgs {
  std::string corpus, slang, concepts;
  std::optional<double> vote_threshold;
};

struct Labeled {
  std::vector<TweetRecord> records;
  Dataset dataset;
};

Labeled label_corpus(const RunConfig& c, Io io) {
  if (c.corpus.empty() || c.slang_lexicon.empty() || (c.concept_lexicon.empty() && c.concept_annotations.empty()))
    throw Error("labeling needs a corpus, a slang lexicon and a concept lexicon or concept annotations");
  const VoteThreshold threshold(c.vote_threshold);
  Labeled out;
  out.records = load_corpus(c.corpus);
  const auto slang = load_terms(c.slang_lexicon, threshold);
  if (!c.concept_annotations.empty()) {
    const auto ann = load_concept_annotations(c.concept_annotations);
    for (const auto& w : ann.warnings) io.err << "warning: " << w << "\n";
    if (!ann.rejected.empty())
      throw Error(c.concept_annotations + ": line " + std::to_string(ann.rejected.front().first) + ": " +
                  ann.rejected.front().second);
    out.dataset = label_with_annotations(out.records, slang, ann.by_tweet);
  } else {
    out.dataset = label_with_terms(out.records, slang, load_terms(c.concept_lexicon, threshold));
  }
  if (out.dataset.examples.empty()) io.err << "warning: no tweet survived labeling; the dataset is empty\n";
  return out;
}

int cmd_label(const Globals& g, const LabelArgs& a, Io io) {
  RunConfig c = resolve(g);
  if (!a.corpus.empty()) c.corpus = a.corpus;
  if (!a.slang.empty()) c.slang_lexicon = a.slang;
  if (!a.concepts.empty()) {
    const std::string text = read_text_file(a.concepts);
    if (is_concept_annotation_csv(text)) {
      c.concept_annotations = a.concepts;
      c.concept_lexicon.clear();
    } else {
      c.concept_lexicon = a.concepts;
      c.concept_annotations.clear();
    }
  }
  if (a.vote_threshold) c.vote_threshold = *a.vote_threshold;
  c.validate();
  const Labeled l = label_corpus(c, io);
  const fs::path dir = prepare_out_dir(c);
  write_stream(dir / "labeled.csv", [&](std::ostream& o) { write_labeled_csv(o, l.dataset, l.records); });
  write_json(dir / "funnel.json", l.dataset.funnel.to_json());
  io.out << "label: " << l.dataset.funnel.input << " tweets, " << l.dataset.funnel.labeled << " labeled, "
         << l.dataset.funnel.positive << " positive\n";
  return kExitOk;
}

// ---- featurize ----

std::vector<LabeledRow> labeled_input(const RunConfig& c, Io io, const fs::path* dir) {
  if (!c.labeled.empty()) return read_labeled_csv(c.labeled);
  const Labeled l = label_corpus(c, io);
  if (dir) write_json(*dir / "funnel.json", l.dataset.funnel.to_json());
  return labeled_rows(l.dataset, l.records);
}

int cmd_featurize(const Globals& g, const std::string& labeled, Io io) {
  RunConfig c = resolve(g);
  if (!labeled.empty()) c.labeled = labeled;
  const fs::path dir = prepare_out_dir(c);
  const auto rows = labeled_input(c, io, &dir);
  const PreparedData p = prepare_experiment(rows, c.featurize_options(), c.plan().split);
  write_stream(dir / "features_train.csv", [&](std::ostream& o) {
    write_feature_csv(o, {p.data.feature_names, p.data.x_train, p.data.y_train});
  });
  write_stream(dir / "features_test.csv", [&](std::ostream& o) {
    write_feature_csv(o, {p.data.feature_names, p.data.x_test, p.data.y_test});
  });
  p.schema.save(dir / "schema.json");
  p.embedding.save(dir / "embedding.json");
  io.out << "featurize: " << rows.size() << " rows, " << p.data.feature_names.size() << " features kept, "
         << p.data.y_train.size() << " train / " << p.data.y_test.size() << " test, schema " << p.data.schema_hash
         << "\n";
  return kExitOk;
}

// ---- train / evaluate ----

struct TrainArgs {
  std::string features;
  std::string model = "xgb";
  std::string strategy = "none";
  std::string schema;
  bool search = false;
};

int cmd_train(const Globals& g, const TrainArgs& a, Io io) {
  const RunConfig c = resolve(g);
  const auto alg = parse_algorithm(a.model);
  if (!alg) throw Error("train: unknown model '" + a.model + "'");
  const auto strat = parse_strategy(a.strategy);
  if (!strat) throw Error("train: unknown strategy '" + a.strategy + "'");
  const FeatureTable t = read_feature_csv(a.features);
  std::string schema_hash;
  if (!a.schema.empty()) {
    const FeatureSchema s = FeatureSchema::load(a.schema);
    if (s.retained != t.names) throw Error("train: feature columns do not match " + a.schema);
    schema_hash = s.hash();
  }
  ModelSpec spec = default_spec(*alg, derive_seed(c.seed, {hash_string("train")}));
  std::optional<SearchResult> sr;
  if (a.search) {
    SearchOptions so;
    so.inner_folds = c.inner_folds;
    so.n_candidates = c.n_candidates;
    so.threshold = c.decision_threshold;
    so.smote_k = c.smote_k;
    so.smote_target_ratio = c.smote_target_ratio;
    so.seed = derive_seed(c.seed, {hash_string("train-search")});
    sr = random_search(*alg, t.x, t.y, *strat, so);
    spec = sr->best;
  }
  BalancingStrategy bs = BalancingStrategy::make(*strat, derive_seed(c.seed, {hash_string("train-smote")}));
  if (bs.smote) {
    bs.smote->k_neighbors = c.smote_k;
    bs.smote->target_ratio = c.smote_target_ratio;
  }
  const ApplyContext ctx = *strat == StrategyKind::smote_in_cv ? ApplyContext::inner_fold : ApplyContext::whole_train;
  const BalancedData b = apply_strategy(bs, t.x, t.y, ctx);
  const TrainedModel m = fit(spec, b.x, b.y, b.weights, {schema_hash});
  const fs::path dir = prepare_out_dir(c);
  m.save(dir / "model.json");
  io.out << "train: " << display_name(*alg) << " (" << spec.describe() << ") on " << b.x.rows() << " rows";
  if (sr) io.out << ", search F1 " << format_fixed(sr->candidates[sr->best_index].mean_f1, 4);
  io.out << " -> " << (dir / "model.json").string() << "\n";
  return kExitOk;
}

int cmd_evaluate(const Globals& g, const std::string& model_path, const std::string& features,
                 std::optional<double> threshold, Io io) {
  const RunConfig c = resolve(g);
  const TrainedModel m = TrainedModel::load(model_path);
  const FeatureTable t = read_feature_csv(features);
  const double thr = threshold.value_or(c.decision_threshold);
  const MetricReport r = evaluate_scores(t.y, predict_proba(m, t.x), thr);
  const fs::path dir = prepare_out_dir(c);
  nlohmann::json j = r.to_json();
  j["model"] = model_path;
  j["features"] = features;
  j["threshold"] = thr;
  write_json(dir / "metrics.json", j);
  io.out << "evaluate: f1 " << format_fixed(r.f1, 4) << " precision " << format_fixed(r.precision, 4) << " recall "
         << format_fixed(r.recall, 4) << " accuracy " << format_fixed(r.accuracy, 4) << " auroc "
         << format_fixed(r.auroc, 4) << " auprc " << format_fixed(r.auprc, 4) << "\n";
  return kExitOk;
}

// ---- run ----

struct RunArgs {
  std::string labeled, corpus, slang, concepts, annotations, models, strategies;
  std::optional<std::size_t> n_candidates;
};

int cmd_run(const Globals& g, const RunArgs& a, Io io) {
  RunConfig c = resolve(g);
  if (!a.labeled.empty()) c.labeled = a.labeled;
  if (!a.corpus.empty()) c.corpus = a.corpus;
  if (!a.slang.empty()) c.slang_lexicon = a.slang;
  if (!a.concepts.empty()) c.concept_lexicon = a.concepts;
  if (!a.annotations.empty()) c.concept_annotations = a.annotations;
  if (!a.models.empty()) c.algorithms = split_list(a.models);
  if (!a.strategies.empty()) c.strategies = split_list(a.strategies);
  if (a.n_candidates) c.n_candidates = *a.n_candidates;
  c.validate();
  const fs::path dir = prepare_out_dir(c);
  write_text_file(dir / "resolved_config.toml", c.to_toml());
  const auto rows = labeled_input(c, io, &dir);
  const PreparedData p = prepare_experiment(rows, c.featurize_options(), c.plan().split);
  ExperimentReport report = run_experiment(p.data, c.plan());
  report.metadata["config"] = c.to_json();
  report.metadata["seeds"] = {{"master", c.seed}, {"embedding", c.embedding_config().seed}};
  nlohmann::json cells = nlohmann::json::object();
  for (const auto& cell : report.cells)
    cells[std::string(to_string(cell.strategy)) + "/" + std::string(to_string(cell.algorithm))] = cell.seed;
  report.metadata["seeds"]["cells"] = cells;
  report.write(dir);
  io.out << report.text_table();
  io.out << "run: " << report.cells.size() << " cells written to " << dir.string() << "\n";
  return kExitOk;
}

// ---- leakage-demo / synth ----

struct LeakArgs {
  std::optional<std::size_t> n_candidates;
  std::optional<std::size_t> n_tweets;
};

int cmd_leakage(const Globals& g, const LeakArgs& a, Io io) {
  const RunConfig c = resolve(g);
  LeakageConfig lc;
  lc.seed = c.seed;
  lc.n_candidates = a.n_candidates.value_or(c.n_candidates);
  if (a.n_tweets) lc.n_tweets = *a.n_tweets;
  const LeakageResult r = run_leakage(lc);
  const fs::path dir = prepare_out_dir(c);
  write_json(dir / "leakage_report.json", r.to_json());
  r.report.write(dir);
  io.out << "smote_pre_cv: CV-F1 " << format_fixed(r.cv_f1_pre, 4) << ", test F1 " << format_fixed(r.test_f1_pre, 4)
         << ", gap " << format_fixed(r.pre_gap(), 4) << " (need >= " << format_fixed(kLeakageMinPreGap, 2) << ")\n";
  io.out << "smote_in_cv:  CV-F1 " << format_fixed(r.cv_f1_in, 4) << ", test F1 " << format_fixed(r.test_f1_in, 4)
         << ", gap " << format_fixed(r.in_gap(), 4) << " (need |gap| <= " << format_fixed(kLeakageMaxInGap, 2)
         << ")\n";
  io.out << (r.passed() ? "leakage ordering holds\n" : "leakage ordering FAILED\n");
  return r.passed() ? kExitOk : kExitValidation;
}

struct SynthArgs {
  std::optional<std::size_t> n_tweets;
  std::optional<double> positive_fraction;
  std::optional<double> overlap;
};

int cmd_synth(const Globals& g, const SynthArgs& a, Io io) {
  RunConfig c = resolve(g);
  if (a.n_tweets) c.synth_n_tweets = *a.n_tweets;
  if (a.positive_fraction) c.synth_positive_fraction = *a.positive_fraction;
  if (a.overlap) c.synth_filler_overlap = *a.overlap;
  c.validate();
  const SynthCorpus corpus = generate_corpus(c.synth_config());
  const fs::path dir = prepare_out_dir(c);
  corpus.write(dir);
  std::size_t labeled = 0, positive = 0;
  for (const auto& t : corpus.truth)
    if (t.outcome.label) {
      ++labeled;
      positive += *t.outcome.label == 1;
    }
  io.out << "synth: " << corpus.records.size() << " tweets (" << labeled << " expected labeled, " << positive
         << " positive) written to " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"weak labeling and imbalanced classification of drug-effect tweets", "weakpol"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "TOML run configuration");
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--out-dir", g.out_dir, "output directory");
  Io io{out, err};
  std::function<int()> action;

  IngestArgs ia;
  auto* ingest = app.add_subcommand("ingest", "read tweet JSONL into a corpus file");
  ingest->add_option("--input", ia.input, "tweet JSONL")->required();
  ingest->add_option("--out", ia.out, "corpus CSV (or .jsonl)");
  ingest->add_flag("--dedupe", ia.dedupe, "drop repeated tweet ids");
  ingest->add_option("--filter-drugs", ia.filter_drugs, "comma-separated drugs to keep");
  ingest->add_flag("--require-usage-term", ia.require_usage, "keep only tweets with a usage term");
  ingest->callback([&] { action = [&] { return cmd_ingest(g, ia, io); }; });

  LabelArgs la;
  auto* label = app.add_subcommand("label", "tag lexicon terms and build the weakly labeled dataset");
  label->add_option("--corpus", la.corpus);
  label->add_option("--slang", la.slang, "slang lexicon");
  label->add_option("--concepts", la.concepts, "concept lexicon or concept annotation CSV");
  label->add_option("--vote-threshold", la.vote_threshold);
  label->callback([&] { action = [&] { return cmd_label(g, la, io); }; });

  std::string feat_labeled;
  auto* featurize = app.add_subcommand("featurize", "split, embed and build feature matrices");
  featurize->add_option("--labeled", feat_labeled, "labeled dataset CSV");
  featurize->callback([&] { action = [&] { return cmd_featurize(g, feat_labeled, io); }; });

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "fit one model on a feature CSV");
  train->add_option("--features", ta.features)->required();
  train->add_option("--model", ta.model);
  train->add_option("--strategy", ta.strategy);
  train->add_option("--schema", ta.schema, "schema.json to stamp into the model");
  train->add_flag("--search", ta.search, "random search instead of the default spec");
  train->callback([&] { action = [&] { return cmd_train(g, ta, io); }; });

  std::string ev_model, ev_features;
  std::optional<double> ev_threshold;
  auto* evaluate = app.add_subcommand("evaluate", "score a saved model on a feature CSV");
  evaluate->add_option("--model", ev_model)->required();
  evaluate->add_option("--features", ev_features)->required();
  evaluate->add_option("--threshold", ev_threshold);
  evaluate->callback([&] { action = [&] { return cmd_evaluate(g, ev_model, ev_features, ev_threshold, io); }; });

  RunArgs ra;
  auto* runc = app.add_subcommand("run", "full strategy x model grid with nested CV and test reports");
  runc->add_option("--labeled", ra.labeled);
  runc->add_option("--corpus", ra.corpus);
  runc->add_option("--slang", ra.slang);
  runc->add_option("--concepts", ra.concepts);
  runc->add_option("--annotations", ra.annotations);
  runc->add_option("--models", ra.models, "comma-separated algorithms");
  runc->add_option("--strategies", ra.strategies, "comma-separated strategies");
  runc->add_option("--n-candidates", ra.n_candidates);
  runc->callback([&] { action = [&] { return cmd_run(g, ra, io); }; });

  LeakArgs lk;
  auto* leak = app.add_subcommand("leakage-demo", "pre-CV versus in-CV SMOTE on a synthetic benchmark");
  leak->add_option("--n-candidates", lk.n_candidates);
  leak->add_option("--n-tweets", lk.n_tweets);
  leak->callback([&] { action = [&] { return cmd_leakage(g, lk, io); }; });

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with lexicons and ground truth");
  synth->add_option("--n-tweets", sa.n_tweets);
  synth->add_option("--positive-fraction", sa.positive_fraction);
  synth->add_option("--filler-overlap", sa.overlap);
  synth->callback([&] { action = [&] { return cmd_synth(g, sa, io); }; });

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  try {
    return action();
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace weakpol::cli
