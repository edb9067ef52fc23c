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

#include "weakpol/models.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>

#include "weakpol/common.hpp"
#include "weakpol/csv.hpp"
#include "weakpol/text.hpp"

namespace weakpol {

namespace {

struct AlgoName {
  Algorithm algorithm;
  std::string_view name;
  std::string_view alias;
  std::string_view display;
};

constexpr std::array<AlgoName, 7> kAlgoNames{{
    {Algorithm::decision_tree, "decision_tree", "dt", "DT"},
    {Algorithm::logistic_regression, "logistic_regression", "lr", "LR"},
    {Algorithm::random_forest, "random_forest", "rf", "RF"},
    {Algorithm::bagging, "bagging", "bagging", "Bagging"},
    {Algorithm::adaboost, "adaboost", "adaboost", "AdaBoost"},
    {Algorithm::gradient_boosted_trees, "gradient_boosted_trees", "xgb", "XGBoost"},
    {Algorithm::mlp, "mlp", "mlp", "MLP"},
}};

const AlgoName& entry(Algorithm a) {
  for (const auto& e : kAlgoNames)
    if (e.algorithm == a) return e;
  throw Error("unknown algorithm");
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

std::string_view to_string(Algorithm algorithm) { return entry(algorithm).name; }
std::string_view display_name(Algorithm algorithm) { return entry(algorithm).display; }

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  const std::string lower = ascii_lower(name);
  for (const auto& e : kAlgoNames)
    if (lower == e.name || lower == e.alias || lower == ascii_lower(e.display)) return e.algorithm;
  if (lower == "xgboost" || lower == "gbt") return Algorithm::gradient_boosted_trees;
  return std::nullopt;
}

// ---- params ----

std::string format_param(const ParamValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, double>) return format_exact(v);
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else {
          std::string s = "(";
          for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
          return s + ")";
        }
      },
      value);
}

nlohmann::json param_to_json(const ParamValue& value) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, value);
}

ParamValue param_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) return j.get<std::vector<std::int64_t>>();
  throw Error("unsupported hyperparameter value " + j.dump());
}

namespace {

template <class T>
const T& get_param(const Params& params, const std::string& name) {
  auto it = params.find(name);
  if (it == params.end()) throw Error("missing hyperparameter '" + name + "'");
  if (const T* v = std::get_if<T>(&it->second)) return *v;
  throw Error("hyperparameter '" + name + "' has the wrong type");
}

}  // namespace

std::int64_t ModelSpec::get_int(const std::string& name) const { return get_param<std::int64_t>(params, name); }
double ModelSpec::get_real(const std::string& name) const { return get_param<double>(params, name); }
const std::string& ModelSpec::get_string(const std::string& name) const { return get_param<std::string>(params, name); }
const std::vector<std::int64_t>& ModelSpec::get_ints(const std::string& name) const {
  return get_param<std::vector<std::int64_t>>(params, name);
}

std::string ModelSpec::describe() const {
  std::string s;
  for (const auto& [k, v] : params) s += (s.empty() ? "" : ";") + k + "=" + format_param(v);
  return s;
}

nlohmann::json ModelSpec::to_json() const {
  nlohmann::json p = nlohmann::json::object();
  for (const auto& [k, v] : params) p[k] = param_to_json(v);
  return {{"algorithm", to_string(algorithm)}, {"seed", seed}, {"params", p}};
}

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
  ModelSpec s;
  const auto name = j.at("algorithm").get<std::string>();
  auto a = parse_algorithm(name);
  if (!a) throw Error("unknown algorithm '" + name + "'");
  s.algorithm = *a;
  s.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& [k, v] : j.at("params").items()) s.params[k] = param_from_json(v);
  search_space(s.algorithm).validate(s.params);
  return s;
}

// ---- search spaces ----

ParamValue ParamDim::sample(Rng& rng) const {
  switch (kind) {
    case Kind::integer:
      return static_cast<std::int64_t>(rng.between(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
    case Kind::real: return rng.uniform(lo, hi);
    case Kind::log_real: return std::exp(rng.uniform(std::log(lo), std::log(hi)));
    case Kind::choice: return choices[rng.below(choices.size())];
  }
  return {};
}

bool ParamDim::contains(const ParamValue& value) const {
  switch (kind) {
    case Kind::integer: {
      const auto* v = std::get_if<std::int64_t>(&value);
      return v && *v >= static_cast<std::int64_t>(lo) && *v <= static_cast<std::int64_t>(hi);
    }
    case Kind::real:
    case Kind::log_real: {
      const auto* v = std::get_if<double>(&value);
      return v && *v >= lo && *v <= hi;
    }
    case Kind::choice: return std::find(choices.begin(), choices.end(), value) != choices.end();
  }
  return false;
}

Params SearchSpace::sample(Rng& rng) const {
  Params p;
  for (const auto& d : dims) p[d.name] = d.sample(rng);
  return p;
}

void SearchSpace::validate(const Params& params) const {
  for (const auto& [k, v] : params)
    if (std::none_of(dims.begin(), dims.end(), [&](const ParamDim& d) { return d.name == k; }))
      throw Error("hyperparameter '" + k + "' is not part of the " + std::string(to_string(algorithm)) + " search space");
  for (const auto& d : dims) {
    auto it = params.find(d.name);
    if (it == params.end()) throw Error("missing hyperparameter '" + d.name + "'");
    if (!d.contains(it->second))
      throw Error("hyperparameter " + d.name + "=" + format_param(it->second) + " is outside its declared range");
  }
}

namespace {

using Kind = ParamDim::Kind;

ParamDim int_dim(std::string name, std::int64_t lo, std::int64_t hi) {
  return {std::move(name), Kind::integer, static_cast<double>(lo), static_cast<double>(hi), {}};
}
ParamDim real_dim(std::string name, double lo, double hi, bool log = false) {
  return {std::move(name), log ? Kind::log_real : Kind::real, lo, hi, {}};
}
ParamDim choice_dim(std::string name, std::vector<ParamValue> choices) {
  return {std::move(name), Kind::choice, 0, 0, std::move(choices)};
}

std::vector<ParamDim> tree_dims() {
  return {choice_dim("criterion", {std::string("gini"), std::string("entropy")}), int_dim("max_depth", 3, 30),
          choice_dim("max_features", {std::string("sqrt"), std::string("log2"), std::string("all")})};
}

SearchSpace make_space(Algorithm a) {
  SearchSpace s{a, {}};
  switch (a) {
    case Algorithm::decision_tree: s.dims = tree_dims(); break;
    case Algorithm::random_forest:
      s.dims = tree_dims();
      s.dims.push_back(int_dim("n_estimators", 50, 500));
      break;
    case Algorithm::bagging:
      s.dims = {real_dim("max_samples", 0.5, 1.0), int_dim("n_estimators", 10, 200),
                choice_dim("warm_start", {std::string("on"), std::string("off")})};
      break;
    case Algorithm::adaboost:
      s.dims = {real_dim("learning_rate", 0.01, 2.0, true), int_dim("n_estimators", 50, 500)};
      break;
    case Algorithm::logistic_regression:
      s.dims = {choice_dim("penalty", {std::string("l1"), std::string("l2")}), real_dim("C", 1e-4, 1e2, true)};
      break;
    case Algorithm::gradient_boosted_trees: s.dims = {int_dim("max_depth", 2, 10), int_dim("n_estimators", 50, 500)}; break;
    case Algorithm::mlp:
      s.dims = {choice_dim("activation", {std::string("relu"), std::string("tanh")}),
                choice_dim("hidden_layer_sizes", {std::vector<std::int64_t>{32}, std::vector<std::int64_t>{64},
                                                  std::vector<std::int64_t>{64, 32}}),
                choice_dim("learning_rate", {std::string("constant"), std::string("adaptive")})};
      break;
  }
  return s;
}

}  // namespace

const SearchSpace& search_space(Algorithm algorithm) {
  static const std::array<SearchSpace, 7> spaces = [] {
    std::array<SearchSpace, 7> out;
    for (std::size_t i = 0; i < kAllAlgorithms.size(); ++i) out[i] = make_space(kAllAlgorithms[i]);
    return out;
  }();
  for (const auto& s : spaces)
    if (s.algorithm == algorithm) return s;
  throw Error("unknown algorithm");
}

std::vector<ModelSpec> sample_specs(Algorithm algorithm, std::size_t n, std::uint64_t seed) {
  const SearchSpace& space = search_space(algorithm);
  Rng rng(derive_seed(seed, {hash_string("search"), static_cast<std::uint64_t>(algorithm)}));
  std::vector<ModelSpec> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({algorithm, space.sample(rng), derive_seed(seed, {hash_string("spec"), i})});
  return out;
}

ModelSpec default_spec(Algorithm algorithm, std::uint64_t seed) {
  ModelSpec s{algorithm, {}, seed};
  auto& p = s.params;
  switch (algorithm) {
    case Algorithm::decision_tree:
      p = {{"criterion", std::string("gini")}, {"max_depth", std::int64_t{10}}, {"max_features", std::string("all")}};
      break;
    case Algorithm::random_forest:
      p = {{"criterion", std::string("gini")},
           {"max_depth", std::int64_t{10}},
           {"max_features", std::string("sqrt")},
           {"n_estimators", std::int64_t{100}}};
      break;
    case Algorithm::bagging:
      p = {{"max_samples", 1.0}, {"n_estimators", std::int64_t{50}}, {"warm_start", std::string("off")}};
      break;
    case Algorithm::adaboost: p = {{"learning_rate", 1.0}, {"n_estimators", std::int64_t{50}}}; break;
    case Algorithm::logistic_regression: p = {{"penalty", std::string("l2")}, {"C", 1.0}}; break;
    case Algorithm::gradient_boosted_trees: p = {{"max_depth", std::int64_t{6}}, {"n_estimators", std::int64_t{100}}}; break;
    case Algorithm::mlp:
      p = {{"activation", std::string("relu")},
           {"hidden_layer_sizes", std::vector<std::int64_t>{64}},
           {"learning_rate", std::string("constant")}};
      break;
  }
  return s;
}

// ---- learners ----

namespace models {

std::uint64_t row_key(std::span<const double> x, int y) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(y) + 0x51ed27u);
  for (double v : x) h = mix64(h ^ std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v));
  return h;
}

nlohmann::json TreeEstimator::to_json() const { return {{"kind", "tree"}, {"tree", tree_.to_json()}}; }

namespace {

tree::Criterion parse_criterion(const std::string& s) {
  if (s == "gini") return tree::Criterion::gini;
  if (s == "entropy") return tree::Criterion::entropy;
  throw Error("unknown criterion '" + s + "'");
}

tree::MaxFeatures parse_max_features(const std::string& s) {
  if (s == "sqrt") return tree::MaxFeatures::sqrt;
  if (s == "log2") return tree::MaxFeatures::log2;
  if (s == "all") return tree::MaxFeatures::all;
  throw Error("unknown max_features '" + s + "'");
}

std::string criterion_name(tree::Criterion c) { return c == tree::Criterion::gini ? "gini" : "entropy"; }
std::string max_features_name(tree::MaxFeatures m) {
  return m == tree::MaxFeatures::sqrt ? "sqrt" : m == tree::MaxFeatures::log2 ? "log2" : "all";
}

std::vector<tree::Tree> trees_from_json(const nlohmann::json& j) {
  std::vector<tree::Tree> out;
  for (const auto& t : j) out.push_back(tree::Tree::from_json(t));
  return out;
}

nlohmann::json trees_to_json(const std::vector<tree::Tree>& trees) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& t : trees) a.push_back(t.to_json());
  return a;
}

}  // namespace

void ForestEstimator::grow(const Matrix& x, std::span<const int> y, std::span<const double> w, std::size_t n_trees,
                           kernels::Exec exec) {
  if (n_trees <= trees_.size()) return;
  const tree::BinnedMatrix bins = tree::BinnedMatrix::build(x);
  std::vector<std::uint64_t> keys(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) keys[i] = row_key(x.row(i), y[i]);
  const std::size_t first = trees_.size();
  trees_.resize(n_trees);
  kernels::for_each_index(
      n_trees - first,
      [&](std::size_t k) {
        const std::size_t t = first + k;
        const std::uint64_t draw_key = derive_seed(config_.seed, {hash_string("bootstrap"), t});
        std::vector<double> eff(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i)
          eff[i] = w[i] * poisson_from_uniform(config_.sample_rate, counter_uniform(draw_key, keys[i]));
        Rng rng(derive_seed(config_.seed, {hash_string("features"), t}));
        trees_[t] = tree::grow_cart(bins, y, eff, config_.cart, rng);
      },
      exec);
}

double ForestEstimator::score_row(std::span<const double> x) const {
  double s = 0;
  for (const auto& t : trees_) s += t.predict(x);
  return trees_.empty() ? 0.5 : s / static_cast<double>(trees_.size());
}

nlohmann::json ForestEstimator::to_json() const {
  return {{"kind", "forest"},
          {"criterion", criterion_name(config_.cart.criterion)},
          {"max_depth", config_.cart.max_depth},
          {"max_features", max_features_name(config_.cart.max_features)},
          {"sample_rate", config_.sample_rate},
          {"seed", config_.seed},
          {"trees", trees_to_json(trees_)}};
}

std::unique_ptr<ForestEstimator> ForestEstimator::from_json(const nlohmann::json& j) {
  Config c;
  c.cart.criterion = parse_criterion(j.at("criterion").get<std::string>());
  c.cart.max_depth = j.at("max_depth").get<int>();
  c.cart.max_features = parse_max_features(j.at("max_features").get<std::string>());
  c.sample_rate = j.at("sample_rate").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  auto f = std::make_unique<ForestEstimator>(c);
  f->trees_ = trees_from_json(j.at("trees"));
  return f;
}

std::unique_ptr<AdaBoostEstimator> AdaBoostEstimator::train(const Matrix& x, std::span<const int> y,
                                                            std::span<const double> w, std::size_t n_estimators,
                                                            double learning_rate) {
  auto model = std::make_unique<AdaBoostEstimator>();
  const std::size_t n = x.rows();
  const tree::BinnedMatrix bins = tree::BinnedMatrix::build(x);
  std::vector<double> d(w.begin(), w.end());
  double total = 0;
  for (double v : d) total += v;
  for (double& v : d) v /= total;
  tree::CartParams stump;
  stump.max_depth = 1;
  Rng rng(0);
  std::vector<char> wrong(n);
  for (std::size_t m = 0; m < n_estimators; ++m) {
    tree::Tree t = tree::grow_cart(bins, y, d, stump, rng);
    double err = 0, dsum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int h = t.predict(x.row(i)) >= 0.5 ? 1 : 0;
      wrong[i] = h != y[i];
      if (wrong[i]) err += d[i];
      dsum += d[i];
    }
    err /= dsum;
    if (err <= 0.0) {
      model->stumps_.push_back(std::move(t));
      model->alphas_.push_back(1.0);
      break;
    }
    if (err >= 0.5) {
      if (model->stumps_.empty()) {
        model->stumps_.push_back(std::move(t));
        model->alphas_.push_back(1.0);
      }
      break;
    }
    const double alpha = learning_rate * std::log((1.0 - err) / err);
    model->stumps_.push_back(std::move(t));
    model->alphas_.push_back(alpha);
    const double boost = std::exp(alpha);
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (wrong[i] && d[i] > 0) d[i] *= boost;
      s += d[i];
    }
    for (double& v : d) v /= s;
  }
  return model;
}

double AdaBoostEstimator::score_row(std::span<const double> x) const {
  double num = 0, den = 0;
  for (std::size_t m = 0; m < stumps_.size(); ++m) {
    num += alphas_[m] * (stumps_[m].predict(x) >= 0.5 ? 1.0 : -1.0);
    den += alphas_[m];
  }
  return den > 0 ? sigmoid(num / den) : 0.5;
}

nlohmann::json AdaBoostEstimator::to_json() const {
  return {{"kind", "adaboost"}, {"alphas", alphas_}, {"trees", trees_to_json(stumps_)}};
}

std::unique_ptr<AdaBoostEstimator> AdaBoostEstimator::from_json(const nlohmann::json& j) {
  auto m = std::make_unique<AdaBoostEstimator>();
  m->alphas_ = j.at("alphas").get<std::vector<double>>();
  m->stumps_ = trees_from_json(j.at("trees"));
  if (m->alphas_.size() != m->stumps_.size()) throw Error("adaboost: alpha and tree counts differ");
  return m;
}

std::unique_ptr<BoostedTreesEstimator> BoostedTreesEstimator::train(const Matrix& x, std::span<const int> y,
                                                                    std::span<const double> w, std::size_t n_estimators,
                                                                    const tree::BoostParams& params,
                                                                    std::vector<double>* loss_trace) {
  auto model = std::make_unique<BoostedTreesEstimator>();
  const std::size_t n = x.rows();
  double wsum = 0, wpos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    wsum += w[i];
    if (y[i] == 1) wpos += w[i];
  }
  const double p0 = std::clamp(wpos / wsum, 1e-6, 1 - 1e-6);
  model->base_margin_ = std::log(p0 / (1 - p0));
  std::vector<double> f(n, model->base_margin_), g(n), h(n), vals;
  auto weighted_loss = [&] {
    double l = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = f[i];
      const double sp = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
      l += w[i] * (sp - (y[i] == 1 ? z : 0.0));
    }
    return l / wsum;
  };
  if (loss_trace) loss_trace->assign(1, weighted_loss());
  const tree::BinnedMatrix bins = tree::BinnedMatrix::build(x);
  model->trees_.reserve(n_estimators);
  for (std::size_t t = 0; t < n_estimators; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(f[i]);
      g[i] = w[i] * (p - (y[i] == 1 ? 1.0 : 0.0));
      h[i] = w[i] * std::max(p * (1 - p), 1e-16);
    }
    model->trees_.push_back(tree::grow_boost_tree(bins, g, h, params, &vals));
    for (std::size_t i = 0; i < n; ++i) f[i] += vals[i];
    if (loss_trace) loss_trace->push_back(weighted_loss());
  }
  return model;
}

std::unique_ptr<BoostedTreesEstimator> BoostedTreesEstimator::prefix(std::size_t n_trees) const {
  if (n_trees > trees_.size()) throw Error("boosted trees: prefix longer than the ensemble");
  auto m = std::make_unique<BoostedTreesEstimator>();
  m->base_margin_ = base_margin_;
  m->trees_.assign(trees_.begin(), trees_.begin() + static_cast<std::ptrdiff_t>(n_trees));
  return m;
}

double BoostedTreesEstimator::margin(std::span<const double> x) const {
  double m = base_margin_;
  for (const auto& t : trees_) m += t.predict(x);
  return m;
}

double BoostedTreesEstimator::score_row(std::span<const double> x) const { return sigmoid(margin(x)); }

nlohmann::json BoostedTreesEstimator::to_json() const {
  return {{"kind", "boosted_trees"}, {"base_margin", base_margin_}, {"trees", trees_to_json(trees_)}};
}

std::unique_ptr<BoostedTreesEstimator> BoostedTreesEstimator::from_json(const nlohmann::json& j) {
  auto m = std::make_unique<BoostedTreesEstimator>();
  m->base_margin_ = j.at("base_margin").get<double>();
  m->trees_ = trees_from_json(j.at("trees"));
  return m;
}

nlohmann::json LogisticEstimator::to_json() const {
  return {{"kind", "logistic"}, {"coef", model_.coef}, {"intercept", model_.intercept}};
}

}  // namespace models

// ---- fit / predict ----

bool shares_prefix(const ModelSpec& small, const ModelSpec& large) {
  return small.algorithm == Algorithm::gradient_boosted_trees && large.algorithm == Algorithm::gradient_boosted_trees &&
         small.get_int("max_depth") == large.get_int("max_depth") &&
         small.get_int("n_estimators") <= large.get_int("n_estimators");
}

TrainedModel prefix_model(const TrainedModel& large, const ModelSpec& small) {
  if (!shares_prefix(small, large.spec())) throw Error("prefix_model: specs do not share a prefix");
  const auto* gbt = dynamic_cast<const models::BoostedTreesEstimator*>(&large.estimator());
  if (!gbt) throw Error("prefix_model: not a boosted-trees model");
  std::shared_ptr<const Estimator> est = gbt->prefix(static_cast<std::size_t>(small.get_int("n_estimators")));
  return TrainedModel(small, std::move(est), large.n_features(), large.schema_hash(), large.meta());
}

TrainedModel::TrainedModel(ModelSpec spec, std::shared_ptr<const Estimator> estimator, std::size_t n_features,
                           std::string schema_hash, TrainingMeta meta)
    : spec_(std::move(spec)),
      estimator_(std::move(estimator)),
      n_features_(n_features),
      schema_hash_(std::move(schema_hash)),
      meta_(meta) {}

nlohmann::json TrainedModel::to_json() const {
  return {{"format_version", kFormatVersion},
          {"spec", spec_.to_json()},
          {"n_features", n_features_},
          {"schema_hash", schema_hash_},
          {"meta",
           {{"rows", meta_.rows}, {"positives", meta_.positives}, {"negatives", meta_.negatives},
            {"wall_seconds", meta_.wall_seconds}}},
          {"params", estimator_->to_json()}};
}

TrainedModel TrainedModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) throw Error("unsupported model format version");
    ModelSpec spec = ModelSpec::from_json(j.at("spec"));
    const auto& p = j.at("params");
    std::shared_ptr<const Estimator> est;
    switch (spec.algorithm) {
      case Algorithm::decision_tree:
        est = std::make_shared<models::TreeEstimator>(tree::Tree::from_json(p.at("tree")));
        break;
      case Algorithm::random_forest:
      case Algorithm::bagging: est = models::ForestEstimator::from_json(p); break;
      case Algorithm::adaboost: est = models::AdaBoostEstimator::from_json(p); break;
      case Algorithm::gradient_boosted_trees: est = models::BoostedTreesEstimator::from_json(p); break;
      case Algorithm::logistic_regression: {
        linear::LrModel m;
        m.coef = p.at("coef").get<std::vector<double>>();
        m.intercept = p.at("intercept").get<double>();
        est = std::make_shared<models::LogisticEstimator>(std::move(m));
        break;
      }
      case Algorithm::mlp: est = std::make_shared<models::MlpEstimator>(mlp::Network::from_json(p)); break;
    }
    TrainingMeta meta;
    const auto& mj = j.at("meta");
    meta.rows = mj.at("rows").get<std::size_t>();
    meta.positives = mj.at("positives").get<std::size_t>();
    meta.negatives = mj.at("negatives").get<std::size_t>();
    meta.wall_seconds = mj.at("wall_seconds").get<double>();
    return TrainedModel(std::move(spec), std::move(est), j.at("n_features").get<std::size_t>(),
                        j.at("schema_hash").get<std::string>(), meta);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid model file: ") + e.what());
  }
}

void TrainedModel::save(const std::filesystem::path& path) const { write_text_file(path, to_json().dump() + "\n"); }

TrainedModel TrainedModel::load(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

TrainedModel fit(const ModelSpec& spec, const Matrix& x, std::span<const int> y, std::span<const double> weights,
                 const FitOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = x.rows();
  if (y.size() != n) throw Error("fit: " + std::to_string(n) + " rows but " + std::to_string(y.size()) + " labels");
  if (!weights.empty() && weights.size() != n)
    throw Error("fit: " + std::to_string(n) + " rows but " + std::to_string(weights.size()) + " weights");
  search_space(spec.algorithm).validate(spec.params);
  TrainingMeta meta;
  meta.rows = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] != 0 && y[i] != 1) throw Error("fit: label at row " + std::to_string(i) + " is not 0/1");
    (y[i] == 1 ? meta.positives : meta.negatives)++;
    for (std::size_t j = 0; j < x.cols(); ++j)
      if (!std::isfinite(x(i, j)))
        throw Error("fit: non-finite feature at row " + std::to_string(i) + ", column " + std::to_string(j));
  }
  if (meta.positives == 0 || meta.negatives == 0) throw Error("fit: training labels contain a single class");
  std::vector<double> w(n, 1.0);
  if (!weights.empty()) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(weights[i]) || weights[i] < 0)
        throw Error("fit: invalid sample weight at row " + std::to_string(i));
      w[i] = weights[i];
      s += w[i];
    }
    if (!(s > 0)) throw Error("fit: sample weights sum to zero");
  }

  std::shared_ptr<const Estimator> est;
  switch (spec.algorithm) {
    case Algorithm::decision_tree: {
      tree::CartParams p;
      p.criterion = models::parse_criterion(spec.get_string("criterion"));
      p.max_depth = static_cast<int>(spec.get_int("max_depth"));
      p.max_features = models::parse_max_features(spec.get_string("max_features"));
      Rng rng(derive_seed(spec.seed, {hash_string("tree")}));
      est = std::make_shared<models::TreeEstimator>(tree::grow_cart(tree::BinnedMatrix::build(x), y, w, p, rng));
      break;
    }
    case Algorithm::random_forest: {
      models::ForestEstimator::Config c;
      c.cart.criterion = models::parse_criterion(spec.get_string("criterion"));
      c.cart.max_depth = static_cast<int>(spec.get_int("max_depth"));
      c.cart.max_features = models::parse_max_features(spec.get_string("max_features"));
      c.seed = spec.seed;
      auto f = std::make_shared<models::ForestEstimator>(c);
      f->grow(x, y, w, static_cast<std::size_t>(spec.get_int("n_estimators")), options.exec);
      est = f;
      break;
    }
    case Algorithm::bagging: {
      models::ForestEstimator::Config c;
      c.sample_rate = spec.get_real("max_samples");
      c.seed = spec.seed;
      auto f = std::make_shared<models::ForestEstimator>(c);
      const auto total = static_cast<std::size_t>(spec.get_int("n_estimators"));
      if (spec.get_string("warm_start") == "on") {
        for (std::size_t k = std::min<std::size_t>(10, total); k < total; k += 10) f->grow(x, y, w, k, options.exec);
      }
      f->grow(x, y, w, total, options.exec);
      est = f;
      break;
    }
    case Algorithm::adaboost:
      est = models::AdaBoostEstimator::train(x, y, w, static_cast<std::size_t>(spec.get_int("n_estimators")),
                                             spec.get_real("learning_rate"));
      break;
    case Algorithm::gradient_boosted_trees: {
      tree::BoostParams p;
      p.max_depth = static_cast<int>(spec.get_int("max_depth"));
      est = models::BoostedTreesEstimator::train(x, y, w, static_cast<std::size_t>(spec.get_int("n_estimators")), p);
      break;
    }
    case Algorithm::logistic_regression: {
      linear::LrParams p;
      p.penalty = spec.get_string("penalty") == "l1" ? linear::Penalty::l1 : linear::Penalty::l2;
      p.c = spec.get_real("C");
      p.max_iter = 2000;
      p.tol = 1e-8;
      est = std::make_shared<models::LogisticEstimator>(linear::fit_lr(x, y, w, p));
      break;
    }
    case Algorithm::mlp: {
      mlp::MlpParams p;
      p.activation = spec.get_string("activation") == "relu" ? mlp::Activation::relu : mlp::Activation::tanh;
      p.schedule = spec.get_string("learning_rate") == "adaptive" ? mlp::Schedule::adaptive : mlp::Schedule::constant;
      p.hidden.clear();
      for (auto h : spec.get_ints("hidden_layer_sizes")) p.hidden.push_back(static_cast<std::size_t>(h));
      p.seed = spec.seed;
      est = std::make_shared<models::MlpEstimator>(mlp::fit_mlp(x, y, w, p));
      break;
    }
  }
  meta.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return TrainedModel(spec, std::move(est), x.cols(), options.schema_hash, meta);
}

std::vector<double> predict_proba(const TrainedModel& model, const Matrix& x, std::string_view schema_hash) {
  if (x.cols() != model.n_features())
    throw Error("predict: model expects " + std::to_string(model.n_features()) + " features, got " +
                std::to_string(x.cols()));
  if (!schema_hash.empty() && !model.schema_hash().empty() && schema_hash != model.schema_hash())
    throw Error("predict: feature schema " + std::string(schema_hash) + " does not match the model's schema " +
                model.schema_hash());
  std::vector<double> out(x.rows());
  const Estimator& est = model.estimator();
  kernels::for_each_index(x.rows(), [&](std::size_t i) {
    const double s = est.score_row(x.row(i));
    out[i] = std::isfinite(s) ? std::clamp(s, 0.0, 1.0) : 0.5;
  });
  return out;
}

std::vector<int> apply_threshold(std::span<const double> scores, double threshold) {
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= threshold ? 1 : 0;
  return out;
}

std::vector<int> predict(const TrainedModel& model, const Matrix& x, double threshold, std::string_view schema_hash) {
  const auto s = predict_proba(model, x, schema_hash);
  return apply_threshold(s, threshold);
}

}  // namespace weakpol
