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

#include "weakpol/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "weakpol/common.hpp"
#include "weakpol/csv.hpp"
#include "weakpol/rng.hpp"

namespace weakpol {

// ---- metrics ----

Confusion confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size())
    throw Error("confusion: " + std::to_string(y_true.size()) + " labels but " + std::to_string(y_pred.size()) +
                " predictions");
  Confusion c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i], p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) throw Error("confusion: labels must be 0 or 1");
    if (t == 1) (p == 1 ? c.tp : c.fn)++;
    else (p == 1 ? c.fp : c.tn)++;
  }
  return c;
}

std::vector<std::string> MetricReport::undefined_names() const {
  static const std::array<std::pair<MetricFlag, const char*>, 5> names{
      {{kPrecisionUndefined, "precision"}, {kRecallUndefined, "recall"}, {kF1Undefined, "f1"},
       {kAurocUndefined, "auroc"}, {kAuprcUndefined, "auprc"}}};
  std::vector<std::string> out;
  for (const auto& [flag, name] : names)
    if (has(flag)) out.emplace_back(name);
  return out;
}

nlohmann::json MetricReport::to_json() const {
  return {{"tn", cm.tn},           {"fn", cm.fn},         {"fp", cm.fp},     {"tp", cm.tp},
          {"precision", precision}, {"recall", recall},    {"f1", f1},        {"accuracy", accuracy},
          {"auroc", auroc},         {"auprc", auprc},      {"undefined", undefined_names()}};
}

MetricReport compute_metrics(std::size_t tn, std::size_t fn, std::size_t fp, std::size_t tp) {
  MetricReport m;
  m.cm = {tn, fn, fp, tp};
  const std::size_t total = m.cm.total();
  if (total == 0) throw Error("metrics: all confusion cells are zero");
  m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(total);
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  else m.undefined |= kPrecisionUndefined;
  if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  else m.undefined |= kRecallUndefined;
  if (m.has(kPrecisionUndefined) || m.has(kRecallUndefined)) m.undefined |= kF1Undefined;
  else if (m.precision + m.recall > 0) m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
  m.undefined |= kAurocUndefined | kAuprcUndefined;
  return m;
}

namespace {

// Row order by descending score; ties keep index order.
std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

void check_scores(std::span<const int> y, std::span<const double> scores, const char* what) {
  if (y.size() != scores.size()) throw Error(std::string(what) + ": label and score counts differ");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw Error(std::string(what) + ": labels must be 0 or 1");
    if (!std::isfinite(scores[i])) throw Error(std::string(what) + ": non-finite score at row " + std::to_string(i));
  }
}

}  // namespace

double auroc(std::span<const int> y_true, std::span<const double> scores) {
  check_scores(y_true, scores, "auroc");
  const auto order = descending_order(scores);
  const std::size_t pos = static_cast<std::size_t>(std::count(y_true.begin(), y_true.end(), 1));
  const std::size_t neg = y_true.size() - pos;
  if (pos == 0 || neg == 0) throw Error("auroc: both classes must be present");
  // Twice the Mann-Whitney U, accumulated in integers.
  unsigned long long u2 = 0, neg_below = neg;
  for (std::size_t a = 0; a < order.size();) {
    std::size_t b = a;
    unsigned long long gp = 0, gn = 0;
    while (b < order.size() && scores[order[b]] == scores[order[a]]) (y_true[order[b++]] == 1 ? gp : gn)++;
    neg_below -= gn;
    u2 += 2 * gp * neg_below + gp * gn;
    a = b;
  }
  return static_cast<double>(u2) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

double auprc(std::span<const int> y_true, std::span<const double> scores) {
  check_scores(y_true, scores, "auprc");
  const std::size_t pos = static_cast<std::size_t>(std::count(y_true.begin(), y_true.end(), 1));
  if (pos == 0) throw Error("auprc: no positive labels");
  const auto order = descending_order(scores);
  double ap = 0;
  std::size_t tp = 0, seen = 0;
  for (std::size_t a = 0; a < order.size();) {
    std::size_t b = a, gp = 0;
    while (b < order.size() && scores[order[b]] == scores[order[a]]) gp += y_true[order[b++]] == 1;
    tp += gp;
    seen += b - a;
    if (gp > 0)
      ap += (static_cast<double>(gp) / static_cast<double>(pos)) * (static_cast<double>(tp) / static_cast<double>(seen));
    a = b;
  }
  return ap;
}

MetricReport evaluate_scores(std::span<const int> y_true, std::span<const double> scores, double threshold) {
  const auto pred = apply_threshold(scores, threshold);
  const Confusion c = confusion(y_true, pred);
  MetricReport m = compute_metrics(c.tn, c.fn, c.fp, c.tp);
  const bool has_pos = c.tp + c.fn > 0, has_neg = c.tn + c.fp > 0;
  if (has_pos && has_neg) {
    m.auroc = auroc(y_true, scores);
    m.undefined &= ~static_cast<unsigned>(kAurocUndefined);
  }
  if (has_pos) {
    m.auprc = auprc(y_true, scores);
    m.undefined &= ~static_cast<unsigned>(kAuprcUndefined);
  }
  return m;
}

// ---- splitting ----

void SplitPlan::validate() const {
  if (!(test_fraction > 0 && test_fraction < 1)) throw Error("split: test_fraction must lie in (0, 1)");
  if (outer_folds < 2 || inner_folds < 2) throw Error("split: fold counts must be at least 2");
}

namespace {

std::array<std::vector<std::size_t>, 2> by_class(std::span<const int> y) {
  std::array<std::vector<std::size_t>, 2> out;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw Error("labels must be 0 or 1");
    out[static_cast<std::size_t>(y[i])].push_back(i);
  }
  return out;
}

}  // namespace

TrainTestSplit stratified_split(std::span<const int> y, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0 && test_fraction < 1)) throw Error("split: test_fraction must lie in (0, 1)");
  auto classes = by_class(y);
  for (int c : {0, 1})
    if (classes[c].size() < 2)
      throw Error("split: class " + std::to_string(c) + " has " + std::to_string(classes[c].size()) +
                  " rows; at least 2 are needed");
  const auto total = static_cast<std::size_t>(std::llround(static_cast<double>(y.size()) * test_fraction));
  std::array<std::size_t, 2> take{};
  std::array<double, 2> rem{};
  for (int c : {0, 1}) {
    const double exact = static_cast<double>(classes[c].size()) * test_fraction;
    take[c] = static_cast<std::size_t>(std::floor(exact));
    rem[c] = exact - std::floor(exact);
  }
  std::size_t left = total > take[0] + take[1] ? total - take[0] - take[1] : 0;
  for (int c : rem[1] > rem[0] ? std::array<int, 2>{1, 0} : std::array<int, 2>{0, 1})
    if (left > 0 && take[c] < classes[c].size()) {
      ++take[c];
      --left;
    }
  TrainTestSplit out;
  for (int c : {0, 1}) {
    take[c] = std::clamp<std::size_t>(take[c], 1, classes[c].size() - 1);
    Rng rng(derive_seed(seed, {hash_string("split"), static_cast<std::uint64_t>(c)}));
    rng.shuffle(std::span<std::size_t>(classes[c]));
    out.test.insert(out.test.end(), classes[c].begin(), classes[c].begin() + static_cast<std::ptrdiff_t>(take[c]));
    out.train.insert(out.train.end(), classes[c].begin() + static_cast<std::ptrdiff_t>(take[c]), classes[c].end());
  }
  std::sort(out.test.begin(), out.test.end());
  std::sort(out.train.begin(), out.train.end());
  return out;
}

std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> y, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error("kfold: k must be at least 2");
  auto classes = by_class(y);
  for (int c : {0, 1})
    if (classes[c].size() < k)
      throw Error("kfold: class " + std::to_string(c) + " has " + std::to_string(classes[c].size()) +
                  " rows, fewer than " + std::to_string(k) + " folds");
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t offset = 0;
  for (int c : {0, 1}) {
    Rng rng(derive_seed(seed, {hash_string("kfold"), static_cast<std::uint64_t>(c)}));
    rng.shuffle(std::span<std::size_t>(classes[c]));
    for (std::size_t r = 0; r < classes[c].size(); ++r) folds[(offset + r) % k].push_back(classes[c][r]);
    offset = (offset + classes[c].size()) % k;
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::vector<std::size_t> complement(std::span<const std::size_t> fold, std::size_t n) {
  std::vector<char> in(n, 0);
  for (std::size_t i : fold) in.at(i) = 1;
  std::vector<std::size_t> out;
  out.reserve(n - fold.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

// ---- search and cross-validation ----

namespace {

std::vector<int> gather_labels(std::span<const int> y, std::span<const std::size_t> idx) {
  return gather<int>(y, idx);
}

// Transform for a training part. smote_pre_cv data was oversampled upstream.
BalancedData training_part(StrategyKind strategy, const Matrix& x, std::span<const int> y, const SearchOptions& opt,
                           std::uint64_t seed) {
  const StrategyKind kind = strategy == StrategyKind::smote_pre_cv ? StrategyKind::none : strategy;
  BalancingStrategy bs = BalancingStrategy::make(kind, seed);
  if (bs.smote) {
    bs.smote->k_neighbors = opt.smote_k;
    bs.smote->target_ratio = opt.smote_target_ratio;
  }
  return apply_strategy(bs, x, y, ApplyContext::inner_fold);
}

BalancedData presample(const Matrix& x, std::span<const int> y, const SearchOptions& opt, std::uint64_t seed) {
  BalancingStrategy bs = BalancingStrategy::make(StrategyKind::smote_pre_cv, seed);
  bs.smote->k_neighbors = opt.smote_k;
  bs.smote->target_ratio = opt.smote_target_ratio;
  return apply_strategy(bs, x, y, ApplyContext::whole_train);
}

// Rows from n_original on are synthetic: they join every training part and are never validated on.
std::vector<std::size_t> with_synthetic(std::vector<std::size_t> train, std::size_t n_original, std::size_t n_total) {
  for (std::size_t i = n_original; i < n_total; ++i) train.push_back(i);
  return train;
}

SearchResult search_prepared(Algorithm algorithm, const Matrix& x, std::span<const int> y, std::size_t n_original,
                             StrategyKind strategy, const SearchOptions& opt) {
  if (opt.n_candidates < 1) throw Error("random search: n_candidates must be at least 1");
  const auto folds =
      stratified_kfold(y.first(n_original), opt.inner_folds, derive_seed(opt.seed, {hash_string("inner")}));
  struct Part {
    BalancedData train;
    Matrix x_valid;
    std::vector<int> y_valid;
  };
  std::vector<Part> parts(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto train = with_synthetic(complement(folds[f], n_original), n_original, x.rows());
    parts[f].train = training_part(strategy, x.select_rows(train), gather_labels(y, train), opt,
                                   derive_seed(opt.seed, {hash_string("inner-smote"), f}));
    parts[f].x_valid = x.select_rows(folds[f]);
    parts[f].y_valid = gather_labels(y, folds[f]);
  }
  SearchResult result;
  for (auto& spec : sample_specs(algorithm, opt.n_candidates, derive_seed(opt.seed, {hash_string("candidates")})))
    result.candidates.push_back({std::move(spec), std::vector<double>(folds.size()), 0.0});
  // Each candidate is scored from its host's fit; hosts are fitted once per fold.
  const std::size_t nc = result.candidates.size();
  std::vector<std::size_t> host(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    host[c] = c;
    for (std::size_t d = 0; d < nc; ++d) {
      const ModelSpec& cur = result.candidates[host[c]].spec;
      const ModelSpec& other = result.candidates[d].spec;
      if (!shares_prefix(cur, other)) continue;
      if (!shares_prefix(other, cur) || d < host[c]) host[c] = d;
    }
  }
  std::vector<std::size_t> hosts;
  for (std::size_t c = 0; c < nc; ++c)
    if (host[c] == c) hosts.push_back(c);
  kernels::for_each_index(hosts.size(), [&](std::size_t k) {
    const std::size_t h = hosts[k];
    for (std::size_t f = 0; f < parts.size(); ++f) {
      const auto& p = parts[f];
      const TrainedModel m = fit(result.candidates[h].spec, p.train.x, p.train.y, p.train.weights);
      for (std::size_t c = 0; c < nc; ++c) {
        if (host[c] != h) continue;
        auto& cand = result.candidates[c];
        const auto scores = c == h ? predict_proba(m, p.x_valid) : predict_proba(prefix_model(m, cand.spec), p.x_valid);
        cand.fold_f1[f] = evaluate_scores(p.y_valid, scores, opt.threshold).f1;
      }
    }
  });
  for (auto& cand : result.candidates)
    cand.mean_f1 = std::accumulate(cand.fold_f1.begin(), cand.fold_f1.end(), 0.0) / static_cast<double>(parts.size());
  for (std::size_t c = 1; c < result.candidates.size(); ++c)
    if (result.candidates[c].mean_f1 > result.candidates[result.best_index].mean_f1) result.best_index = c;
  result.best = result.candidates[result.best_index].spec;
  return result;
}

}  // namespace

SearchResult random_search(Algorithm algorithm, const Matrix& x, std::span<const int> y, StrategyKind strategy,
                           const SearchOptions& options) {
  if (strategy == StrategyKind::smote_pre_cv) {
    const BalancedData b = presample(x, y, options, derive_seed(options.seed, {hash_string("presample")}));
    return search_prepared(algorithm, b.x, b.y, x.rows(), strategy, options);
  }
  return search_prepared(algorithm, x, y, x.rows(), strategy, options);
}

std::array<double, 6> metric_values(const MetricReport& m) {
  return {m.precision, m.recall, m.f1, m.accuracy, m.auroc, m.auprc};
}

namespace {
std::size_t metric_index(std::string_view metric) {
  for (std::size_t i = 0; i < kMetricNames.size(); ++i)
    if (metric == kMetricNames[i]) return i;
  throw Error("unknown metric '" + std::string(metric) + "'");
}
}  // namespace

double MetricSummary::get_mean(std::string_view metric) const { return mean[metric_index(metric)]; }
double MetricSummary::get_std(std::string_view metric) const { return std[metric_index(metric)]; }

MetricSummary summarize(std::span<const MetricReport> reports) {
  MetricSummary s;
  if (reports.empty()) return s;
  const double n = static_cast<double>(reports.size());
  for (const auto& r : reports) {
    const auto v = metric_values(r);
    for (std::size_t k = 0; k < v.size(); ++k) s.mean[k] += v[k];
  }
  for (double& m : s.mean) m /= n;
  for (const auto& r : reports) {
    const auto v = metric_values(r);
    for (std::size_t k = 0; k < v.size(); ++k) s.std[k] += (v[k] - s.mean[k]) * (v[k] - s.mean[k]);
  }
  for (double& v : s.std) v = std::sqrt(v / n);
  return s;
}

CVResult nested_cv(const Matrix& x, std::span<const int> y, Algorithm algorithm, StrategyKind strategy,
                   const CvOptions& options) {
  CVResult out;
  out.strategy = strategy;
  out.algorithm = algorithm;
  const std::size_t n_original = x.rows();
  BalancedData pre;
  const Matrix* data_x = &x;
  std::span<const int> data_y = y;
  if (strategy == StrategyKind::smote_pre_cv) {
    pre = presample(x, y, options.search, derive_seed(options.seed, {hash_string("presample")}));
    data_x = &pre.x;
    data_y = pre.y;
  }
  const auto folds =
      stratified_kfold(data_y.first(n_original), options.outer_folds, derive_seed(options.seed, {hash_string("outer")}));
  std::vector<MetricReport> reports;
  for (std::size_t o = 0; o < folds.size(); ++o) {
    const auto original = complement(folds[o], n_original);
    const auto train = with_synthetic(original, n_original, data_x->rows());
    const Matrix xt = data_x->select_rows(train);
    const auto yt = gather_labels(data_y, train);
    SearchOptions so = options.search;
    so.seed = derive_seed(options.seed, {hash_string("search"), o});
    const SearchResult sr = search_prepared(algorithm, xt, yt, original.size(), strategy, so);
    const BalancedData part = training_part(strategy, xt, yt, options.search,
                                            derive_seed(options.seed, {hash_string("outer-smote"), o}));
    const TrainedModel model = fit(sr.best, part.x, part.y, part.weights);
    const auto scores = predict_proba(model, data_x->select_rows(folds[o]));
    FoldResult fr;
    fr.metrics = evaluate_scores(gather_labels(data_y, folds[o]), scores, options.search.threshold);
    fr.chosen = sr.best;
    fr.search_f1 = sr.candidates[sr.best_index].mean_f1;
    fr.n_train = part.x.rows();
    fr.n_validation = folds[o].size();
    fr.n_synthetic_train = part.provenance.size() + (train.size() - original.size());
    fr.n_synthetic_validation = static_cast<std::size_t>(
        std::count_if(folds[o].begin(), folds[o].end(), [&](std::size_t i) { return i >= n_original; }));
    reports.push_back(fr.metrics);
    out.folds.push_back(std::move(fr));
  }
  out.summary = summarize(reports);
  return out;
}

// ---- experiment grid ----

void ExperimentPlan::validate() const {
  split.validate();
  if (n_candidates < 1) throw Error("plan: n_candidates must be at least 1");
  if (!(threshold > 0 && threshold < 1)) throw Error("plan: threshold must lie in (0, 1)");
  if (smote_k < 1) throw Error("plan: smote_k must be at least 1");
  if (!(smote_target_ratio > 0 && smote_target_ratio <= 1)) throw Error("plan: smote target ratio must lie in (0, 1]");
  if (algorithms.empty() || strategies.empty()) throw Error("plan: empty algorithm or strategy list");
}

nlohmann::json ExperimentPlan::to_json() const {
  nlohmann::json algs = nlohmann::json::array(), strats = nlohmann::json::array();
  for (auto a : algorithms) algs.push_back(to_string(a));
  for (auto s : strategies) strats.push_back(to_string(s));
  return {{"test_fraction", split.test_fraction},
          {"outer_folds", split.outer_folds},
          {"inner_folds", split.inner_folds},
          {"seed", split.seed},
          {"n_candidates", n_candidates},
          {"threshold", threshold},
          {"smote_k", smote_k},
          {"smote_target_ratio", smote_target_ratio},
          {"std_convention", "population"},
          {"algorithms", algs},
          {"strategies", strats}};
}

std::uint64_t cell_seed(std::uint64_t master, StrategyKind strategy, Algorithm algorithm) {
  return derive_seed(master, {hash_string("cell"), hash_string(to_string(strategy)), hash_string(to_string(algorithm))});
}

const CellResult& ExperimentReport::cell(StrategyKind strategy, Algorithm algorithm) const {
  for (const auto& c : cells)
    if (c.strategy == strategy && c.algorithm == algorithm) return c;
  throw Error("report has no cell " + std::string(to_string(strategy)) + "/" + std::string(to_string(algorithm)));
}

namespace {

std::string fixed6(double v) { return format_fixed(v, 6); }

}  // namespace

std::string ExperimentReport::cv_csv() const {
  std::string s = "strategy,algorithm";
  for (const char* m : kMetricNames) s += std::string(",") + m + "_mean," + m + "_std";
  s += "\n";
  for (const auto& c : cells) {
    s += std::string(to_string(c.strategy)) + "," + std::string(display_name(c.algorithm));
    for (std::size_t k = 0; k < kMetricNames.size(); ++k)
      s += "," + fixed6(c.cv.summary.mean[k]) + "," + fixed6(c.cv.summary.std[k]);
    s += "\n";
  }
  return s;
}

std::string ExperimentReport::test_csv() const {
  std::string s = "strategy,algorithm,f1,recall,precision,accuracy,tn,fn,fp,tp,auroc,auprc\n";
  for (const auto& c : cells) {
    const auto& m = c.test.metrics;
    s += std::string(to_string(c.strategy)) + "," + std::string(display_name(c.algorithm)) + "," + fixed6(m.f1) + "," +
         fixed6(m.recall) + "," + fixed6(m.precision) + "," + fixed6(m.accuracy) + "," + std::to_string(m.cm.tn) + "," +
         std::to_string(m.cm.fn) + "," + std::to_string(m.cm.fp) + "," + std::to_string(m.cm.tp) + "," +
         fixed6(m.auroc) + "," + fixed6(m.auprc) + "\n";
  }
  return s;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json cj = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json folds = nlohmann::json::array();
    for (const auto& f : c.cv.folds)
      folds.push_back({{"metrics", f.metrics.to_json()},
                       {"chosen", f.chosen.to_json()},
                       {"search_f1", f.search_f1},
                       {"n_train", f.n_train},
                       {"n_validation", f.n_validation},
                       {"n_synthetic_train", f.n_synthetic_train},
                       {"n_synthetic_validation", f.n_synthetic_validation}});
    nlohmann::json mean, sd;
    for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
      mean[kMetricNames[k]] = c.cv.summary.mean[k];
      sd[kMetricNames[k]] = c.cv.summary.std[k];
    }
    cj.push_back({{"strategy", to_string(c.strategy)},
                  {"algorithm", to_string(c.algorithm)},
                  {"seed", c.seed},
                  {"cv", {{"folds", folds}, {"mean", mean}, {"std", sd}}},
                  {"test",
                   {{"metrics", c.test.metrics.to_json()},
                    {"chosen", c.test.chosen.to_json()},
                    {"search_f1", c.test.search_f1},
                    {"n_train", c.test.n_train}}}});
  }
  return {{"plan", plan.to_json()},
          {"n_train", n_train},
          {"n_test", n_test},
          {"train_positives", train_positives},
          {"test_positives", test_positives},
          {"schema_hash", schema_hash},
          {"metadata", metadata},
          {"cells", cj}};
}

std::string ExperimentReport::text_table() const {
  std::ostringstream o;
  char buf[256];
  o << "Cross-validation (mean +/- std over " << plan.split.outer_folds << " outer folds, " << plan.split.inner_folds
    << " inner folds, " << plan.n_candidates << " candidates)\n";
  std::snprintf(buf, sizeof buf, "%-16s %-9s %-17s %-17s %-17s %-17s\n", "strategy", "model", "F1", "Recall",
                "Precision", "Accuracy");
  o << buf;
  auto pm = [](const MetricSummary& s, std::size_t k) {
    char b[32];
    std::snprintf(b, sizeof b, "%.4f +/- %.4f", s.mean[k], s.std[k]);
    return std::string(b);
  };
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%-16s %-9s %-17s %-17s %-17s %-17s\n", std::string(display_name(c.strategy)).c_str(),
                  std::string(display_name(c.algorithm)).c_str(), pm(c.cv.summary, 2).c_str(),
                  pm(c.cv.summary, 1).c_str(), pm(c.cv.summary, 0).c_str(), pm(c.cv.summary, 3).c_str());
    o << buf;
  }
  o << "\nTest set (" << n_test << " rows, " << test_positives << " positive)\n";
  std::snprintf(buf, sizeof buf, "%-16s %-9s %7s %7s %9s %8s %7s %6s %6s %6s %7s %7s\n", "strategy", "model", "F1",
                "Recall", "Precision", "Accuracy", "TN", "FN", "FP", "TP", "AUROC", "AUPRC");
  o << buf;
  for (const auto& c : cells) {
    const auto& m = c.test.metrics;
    std::snprintf(buf, sizeof buf, "%-16s %-9s %7.4f %7.4f %9.4f %8.4f %7zu %6zu %6zu %6zu %7.4f %7.4f\n",
                  std::string(display_name(c.strategy)).c_str(), std::string(display_name(c.algorithm)).c_str(), m.f1,
                  m.recall, m.precision, m.accuracy, m.cm.tn, m.cm.fn, m.cm.fp, m.cm.tp, m.auroc, m.auprc);
    o << buf;
  }
  return o.str();
}

void ExperimentReport::write(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_text_file(dir / "cv_results.csv", cv_csv());
  write_text_file(dir / "test_results.csv", test_csv());
  write_text_file(dir / "report.json", to_json().dump(2) + "\n");
  write_text_file(dir / "report.txt", text_table());
}

ExperimentReport run_experiment(const ExperimentData& data, const ExperimentPlan& plan) {
  plan.validate();
  if (data.x_train.rows() != data.y_train.size() || data.x_test.rows() != data.y_test.size())
    throw Error("experiment: row and label counts differ");
  if (data.x_train.cols() != data.x_test.cols()) throw Error("experiment: train and test widths differ");
  ExperimentReport report;
  report.plan = plan;
  report.n_train = data.y_train.size();
  report.n_test = data.y_test.size();
  report.train_positives = static_cast<std::size_t>(std::count(data.y_train.begin(), data.y_train.end(), 1));
  report.test_positives = static_cast<std::size_t>(std::count(data.y_test.begin(), data.y_test.end(), 1));
  report.schema_hash = data.schema_hash;
  for (auto s : plan.strategies)
    for (auto a : plan.algorithms) report.cells.push_back({s, a, cell_seed(plan.split.seed, s, a), {}, {}});

  SearchOptions base;
  base.inner_folds = plan.split.inner_folds;
  base.n_candidates = plan.n_candidates;
  base.threshold = plan.threshold;
  base.smote_k = plan.smote_k;
  base.smote_target_ratio = plan.smote_target_ratio;

  kernels::for_each_index(report.cells.size(), [&](std::size_t i) {
    CellResult& cell = report.cells[i];
    CvOptions cv{plan.split.outer_folds, base, derive_seed(cell.seed, {hash_string("cv")})};
    cell.cv = nested_cv(data.x_train, data.y_train, cell.algorithm, cell.strategy, cv);

    SearchOptions so = base;
    so.seed = derive_seed(cell.seed, {hash_string("final-search")});
    BalancedData pre;
    const Matrix* tx = &data.x_train;
    std::span<const int> ty = data.y_train;
    if (cell.strategy == StrategyKind::smote_pre_cv) {
      pre = presample(data.x_train, data.y_train, base, derive_seed(cell.seed, {hash_string("final-presample")}));
      tx = &pre.x;
      ty = pre.y;
    }
    const SearchResult sr = search_prepared(cell.algorithm, *tx, ty, data.x_train.rows(), cell.strategy, so);
    const BalancedData part =
        training_part(cell.strategy, *tx, ty, base, derive_seed(cell.seed, {hash_string("final-smote")}));
    const TrainedModel model = fit(sr.best, part.x, part.y, part.weights, {data.schema_hash});
    cell.test.metrics = evaluate_scores(data.y_test, predict_proba(model, data.x_test, data.schema_hash), plan.threshold);
    cell.test.chosen = sr.best;
    cell.test.search_f1 = sr.candidates[sr.best_index].mean_f1;
    cell.test.n_train = part.x.rows();
  });
  return report;
}

ExperimentReport run_experiment(const Matrix& x, std::span<const int> y, const ExperimentPlan& plan) {
  plan.validate();
  if (x.rows() != y.size()) throw Error("experiment: row and label counts differ");
  const TrainTestSplit split = stratified_split(y, plan.split.test_fraction, plan.split.seed);
  ExperimentData data;
  data.x_train = x.select_rows(split.train);
  data.y_train = gather<int>(y, split.train);
  data.x_test = x.select_rows(split.test);
  data.y_test = gather<int>(y, split.test);
  return run_experiment(data, plan);
}

}  // namespace weakpol
