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

#include "weakpol/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "weakpol/common.hpp"

namespace weakpol::tree {

BinnedMatrix BinnedMatrix::build(const Matrix& x, std::size_t max_bins) {
  if (max_bins < 2 || max_bins > 256) throw Error("max_bins must be in [2, 256]");
  BinnedMatrix b;
  b.rows_ = x.rows();
  const std::size_t n = x.rows();
  b.cuts_.resize(x.cols());
  b.bins_.resize(x.cols() * n);
  std::vector<double> v;
  for (std::size_t f = 0; f < x.cols(); ++f) {
    v = x.column(f);
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> uniq = sorted;
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    auto midpoint = [](double a, double c) {
      const double m = a + (c - a) / 2;
      return m > a ? m : c;
    };
    auto& cuts = b.cuts_[f];
    if (uniq.size() <= max_bins) {
      for (std::size_t j = 1; j < uniq.size(); ++j) cuts.push_back(midpoint(uniq[j - 1], uniq[j]));
    } else {
      for (std::size_t q = 1; q < max_bins; ++q) {
        const double value = sorted[q * n / max_bins];
        const auto j = static_cast<std::size_t>(std::lower_bound(uniq.begin(), uniq.end(), value) - uniq.begin());
        if (j == 0) continue;
        const double cut = midpoint(uniq[j - 1], uniq[j]);
        if (cuts.empty() || cut > cuts.back()) cuts.push_back(cut);
      }
    }
    std::uint8_t* col = b.bins_.data() + f * n;
    for (std::size_t i = 0; i < n; ++i)
      col[i] = static_cast<std::uint8_t>(std::upper_bound(cuts.begin(), cuts.end(), v[i]) - cuts.begin());
  }
  const std::size_t nf = x.cols();
  b.offsets_.assign(nf + 1, 0);
  for (std::size_t f = 0; f < nf; ++f) b.offsets_[f + 1] = b.offsets_[f] + b.n_bins(f);
  b.slots_.resize(n * nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const std::uint8_t* col = b.column(f);
    for (std::size_t i = 0; i < n; ++i) b.slots_[i * nf + f] = static_cast<std::uint32_t>(b.offsets_[f] + col[i]);
  }
  return b;
}

std::size_t Tree::leaf_index(std::span<const double> x) const {
  std::size_t node = 0;
  while (feature[node] >= 0)
    node = static_cast<std::size_t>(x[static_cast<std::size_t>(feature[node])] < threshold[node] ? left[node] : right[node]);
  return node;
}

std::size_t Tree::depth() const {
  if (feature.empty()) return 0;
  std::vector<std::size_t> d(size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    best = std::max(best, d[i]);
    if (feature[i] >= 0) {
      d[static_cast<std::size_t>(left[i])] = d[i] + 1;
      d[static_cast<std::size_t>(right[i])] = d[i] + 1;
    }
  }
  return best;
}

int Tree::add_leaf(double v) {
  feature.push_back(-1);
  threshold.push_back(0.0);
  left.push_back(-1);
  right.push_back(-1);
  value.push_back(v);
  return static_cast<int>(feature.size() - 1);
}

nlohmann::json Tree::to_json() const {
  return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"value", value}};
}

Tree Tree::from_json(const nlohmann::json& j) {
  Tree t;
  t.feature = j.at("feature").get<std::vector<int>>();
  t.threshold = j.at("threshold").get<std::vector<double>>();
  t.left = j.at("left").get<std::vector<int>>();
  t.right = j.at("right").get<std::vector<int>>();
  t.value = j.at("value").get<std::vector<double>>();
  const std::size_t n = t.feature.size();
  if (n == 0 || t.threshold.size() != n || t.left.size() != n || t.right.size() != n || t.value.size() != n)
    throw Error("tree: inconsistent node arrays");
  for (std::size_t i = 0; i < n; ++i)
    if (t.feature[i] >= 0 && (t.left[i] <= static_cast<int>(i) || t.right[i] <= static_cast<int>(i) ||
                              t.left[i] >= static_cast<int>(n) || t.right[i] >= static_cast<int>(n)))
      throw Error("tree: invalid child index");
  return t;
}

std::size_t resolve_max_features(MaxFeatures mode, std::size_t n_features) {
  const double f = static_cast<double>(n_features);
  std::size_t m = n_features;
  if (mode == MaxFeatures::sqrt) m = static_cast<std::size_t>(std::floor(std::sqrt(f)));
  if (mode == MaxFeatures::log2) m = static_cast<std::size_t>(std::floor(std::log2(f)));
  return std::clamp<std::size_t>(m, 1, std::max<std::size_t>(1, n_features));
}

namespace {

struct Work {
  int node;
  std::size_t begin;
  std::size_t end;
  int depth;
};

struct Split {
  bool found = false;
  double gain = 0.0;
  std::size_t feature = 0;
  std::size_t cut = 0;
};

bool better(const Split& cand, const Split& best) {
  if (!best.found) return true;
  if (cand.gain != best.gain) return cand.gain > best.gain;
  if (cand.feature != best.feature) return cand.feature < best.feature;
  return cand.cut < best.cut;
}

double weighted_impurity(double w0, double w1, Criterion c) {
  const double w = w0 + w1;
  if (w <= 0) return 0.0;
  if (c == Criterion::gini) return w - (w0 * w0 + w1 * w1) / w;
  double s = 0.0;
  if (w0 > 0) s -= w0 * std::log2(w0 / w);
  if (w1 > 0) s -= w1 * std::log2(w1 / w);
  return s;
}

// Per-bin accumulators for one feature. Small nodes are scanned by sorting
// their rows instead of touching every bin.
struct BinStat {
  std::uint8_t bin;
  double a;
  double b;
};

template <class Accumulate, class Score>
void scan_feature(const std::uint8_t* col, std::span<const std::uint32_t> rows, std::size_t n_bins, Accumulate acc,
                  Score score, std::vector<double>& ha, std::vector<double>& hb, std::vector<std::uint32_t>& hc,
                  std::vector<BinStat>& small) {
  if (rows.size() * 4 < n_bins) {
    small.clear();
    for (std::uint32_t i : rows) {
      auto [a, b] = acc(i);
      small.push_back({col[i], a, b});
    }
    std::stable_sort(small.begin(), small.end(), [](const BinStat& l, const BinStat& r) { return l.bin < r.bin; });
    double la = 0, lb = 0;
    std::size_t lc = 0;
    for (std::size_t k = 0; k < small.size(); ++k) {
      la += small[k].a;
      lb += small[k].b;
      ++lc;
      if (k + 1 < small.size() && small[k + 1].bin != small[k].bin) score(static_cast<std::size_t>(small[k].bin), la, lb, lc);
    }
    return;
  }
  ha.assign(n_bins, 0.0);
  hb.assign(n_bins, 0.0);
  hc.assign(n_bins, 0);
  for (std::uint32_t i : rows) {
    auto [a, b] = acc(i);
    ha[col[i]] += a;
    hb[col[i]] += b;
    ++hc[col[i]];
  }
  double la = 0, lb = 0;
  std::size_t lc = 0;
  for (std::size_t c = 0; c + 1 < n_bins; ++c) {
    la += ha[c];
    lb += hb[c];
    lc += hc[c];
    if (hc[c] == 0) continue;
    score(c, la, lb, lc);
  }
}

void partition(std::vector<std::uint32_t>& rows, std::size_t begin, std::size_t end, const std::uint8_t* col,
               std::size_t cut, std::vector<std::uint32_t>& scratch, std::size_t& mid) {
  scratch.clear();
  std::size_t w = begin;
  for (std::size_t k = begin; k < end; ++k) {
    if (col[rows[k]] <= cut) rows[w++] = rows[k];
    else scratch.push_back(rows[k]);
  }
  mid = w;
  std::copy(scratch.begin(), scratch.end(), rows.begin() + static_cast<std::ptrdiff_t>(w));
}

}  // namespace

Tree grow_cart(const BinnedMatrix& x, std::span<const int> y, std::span<const double> w, const CartParams& params,
               Rng& rng) {
  const std::size_t n = x.rows();
  const std::size_t nf = x.cols();
  if (y.size() != n || w.size() != n) throw Error("grow_cart: size mismatch");
  std::vector<std::uint32_t> rows;
  for (std::size_t i = 0; i < n; ++i)
    if (w[i] > 0) rows.push_back(static_cast<std::uint32_t>(i));
  Tree t;
  if (rows.empty()) {
    t.add_leaf(0.5);
    return t;
  }
  const std::size_t m = resolve_max_features(params.max_features, nf);
  std::vector<std::size_t> feats(nf);
  std::vector<double> ha, hb;
  std::vector<std::uint32_t> hc, scratch;
  std::vector<BinStat> small;
  auto acc = [&](std::uint32_t i) -> std::pair<double, double> {
    return y[i] == 1 ? std::pair{0.0, w[i]} : std::pair{w[i], 0.0};
  };

  std::vector<Work> stack;
  t.add_leaf(0.0);
  stack.push_back({0, 0, rows.size(), 0});
  while (!stack.empty()) {
    const Work wk = stack.back();
    stack.pop_back();
    double w0 = 0, w1 = 0;
    for (std::size_t k = wk.begin; k < wk.end; ++k) {
      auto [a, b] = acc(rows[k]);
      w0 += a;
      w1 += b;
    }
    const double total = w0 + w1;
    t.value[static_cast<std::size_t>(wk.node)] = total > 0 ? w1 / total : 0.5;
    const std::size_t count = wk.end - wk.begin;
    if ((params.max_depth > 0 && wk.depth >= params.max_depth) || w0 <= 0 || w1 <= 0 ||
        count < std::max<std::size_t>(2, params.min_samples_split))
      continue;

    std::iota(feats.begin(), feats.end(), 0);
    std::size_t n_try = nf;
    if (m < nf) {
      for (std::size_t k = 0; k < m; ++k) std::swap(feats[k], feats[k + rng.below(nf - k)]);
      n_try = m;
      std::sort(feats.begin(), feats.begin() + static_cast<std::ptrdiff_t>(m));
    }
    const double parent = weighted_impurity(w0, w1, params.criterion);
    Split best;
    const std::span<const std::uint32_t> node_rows(rows.data() + wk.begin, count);
    for (std::size_t fi = 0; fi < n_try; ++fi) {
      const std::size_t f = feats[fi];
      if (x.n_bins(f) < 2) continue;
      scan_feature(x.column(f), node_rows, x.n_bins(f), acc,
                   [&](std::size_t cut, double l0, double l1, std::size_t lc) {
                     if (lc == 0 || lc == count) return;
                     const double r0 = w0 - l0, r1 = w1 - l1;
                     if (l0 + l1 <= 0 || r0 + r1 <= 0) return;
                     Split cand{true, parent - weighted_impurity(l0, l1, params.criterion) -
                                          weighted_impurity(r0, r1, params.criterion),
                                f, cut};
                     if (better(cand, best)) best = cand;
                   },
                   ha, hb, hc, small);
    }
    if (!best.found) continue;
    std::size_t mid = 0;
    partition(rows, wk.begin, wk.end, x.column(best.feature), best.cut, scratch, mid);
    const int l = t.add_leaf(0.0);
    const int r = t.add_leaf(0.0);
    const auto node = static_cast<std::size_t>(wk.node);
    t.feature[node] = static_cast<int>(best.feature);
    t.threshold[node] = x.cuts(best.feature)[best.cut];
    t.left[node] = l;
    t.right[node] = r;
    stack.push_back({r, mid, wk.end, wk.depth + 1});
    stack.push_back({l, wk.begin, mid, wk.depth + 1});
  }
  return t;
}

namespace {

struct HistBin {
  double g;
  double h;
  std::uint32_t c;
};

// Nodes with fewer rows are scanned by sorting instead of through histograms.
constexpr std::size_t kHistMinRows = 192;

struct BoostWork {
  int node;
  std::size_t begin;
  std::size_t end;
  int depth;
  int hist;
};

}  // namespace

Tree grow_boost_tree(const BinnedMatrix& x, std::span<const double> g, std::span<const double> h,
                     const BoostParams& params, std::vector<double>* row_values) {
  const std::size_t n = x.rows();
  const std::size_t nf = x.cols();
  if (g.size() != n || h.size() != n) throw Error("grow_boost_tree: size mismatch");
  std::vector<std::uint32_t> rows;
  for (std::size_t i = 0; i < n; ++i)
    if (h[i] > 0 || g[i] != 0) rows.push_back(static_cast<std::uint32_t>(i));
  if (row_values) row_values->assign(n, 0.0);
  Tree t;
  t.add_leaf(0.0);

  // Histogram buffers, reused across trees on this thread.
  thread_local std::vector<std::vector<HistBin>> pool;
  std::vector<int> free_list;
  std::size_t n_used = 0;
  auto acquire = [&]() {
    if (!free_list.empty()) {
      const int id = free_list.back();
      free_list.pop_back();
      return id;
    }
    if (n_used == pool.size()) pool.emplace_back();
    pool[n_used].resize(x.total_bins());
    return static_cast<int>(n_used++);
  };
  auto release = [&](int id) {
    if (id >= 0) free_list.push_back(id);
  };
  auto build = [&](int id, std::span<const std::uint32_t> node_rows) {
    auto& hb = pool[static_cast<std::size_t>(id)];
    std::fill(hb.begin(), hb.end(), HistBin{0, 0, 0});
    HistBin* base = hb.data();
    for (std::uint32_t i : node_rows) {
      const std::uint32_t* slot = x.row_slots(i);
      const double gi = g[i], hi = h[i];
      for (std::size_t f = 0; f < nf; ++f) {
        HistBin& b = base[slot[f]];
        b.g += gi;
        b.h += hi;
        ++b.c;
      }
    }
  };
  // parent -= child, leaving the sibling's histogram in the parent buffer
  auto subtract = [&](int parent, int child) {
    auto& p = pool[static_cast<std::size_t>(parent)];
    const auto& c = pool[static_cast<std::size_t>(child)];
    for (std::size_t k = 0; k < p.size(); ++k) {
      p[k].c -= c[k].c;
      if (p[k].c == 0) {
        p[k].g = 0;
        p[k].h = 0;
      } else {
        p[k].g -= c[k].g;
        p[k].h -= c[k].h;
      }
    }
  };

  std::vector<std::uint32_t> scratch;
  std::vector<BinStat> small;
  small.reserve(kHistMinRows);
  auto score = [&](double gs, double hs) { return gs * gs / (hs + params.lambda); };

  std::vector<BoostWork> stack;
  stack.push_back({0, 0, rows.size(), 0, -1});
  while (!stack.empty()) {
    BoostWork wk = stack.back();
    stack.pop_back();
    double gs = 0, hs = 0;
    for (std::size_t k = wk.begin; k < wk.end; ++k) {
      gs += g[rows[k]];
      hs += h[rows[k]];
    }
    const auto node = static_cast<std::size_t>(wk.node);
    t.value[node] = -params.eta * gs / (hs + params.lambda);
    const std::size_t count = wk.end - wk.begin;
    const std::span<const std::uint32_t> node_rows(rows.data() + wk.begin, count);
    bool split = false;
    if (wk.depth < params.max_depth && count >= 2 && hs >= 2 * params.min_child_weight) {
      if (wk.hist < 0 && count >= kHistMinRows) {
        wk.hist = acquire();
        build(wk.hist, node_rows);
      }
      const double parent = score(gs, hs);
      Split best;
      std::size_t f = 0;
      auto consider = [&](std::size_t cut, double lg, double lh, std::size_t lc) {
        if (lc == 0 || lc == count) return;
        const double rg = gs - lg, rh = hs - lh;
        if (lh < params.min_child_weight || rh < params.min_child_weight) return;
        const double gain = 0.5 * (score(lg, lh) + score(rg, rh) - parent);
        if (!(gain > 0)) return;
        Split cand{true, gain, f, cut};
        if (better(cand, best)) best = cand;
      };
      for (f = 0; f < nf; ++f) {
        const std::size_t nb = x.n_bins(f);
        if (nb < 2) continue;
        if (wk.hist >= 0) {
          const HistBin* base = pool[static_cast<std::size_t>(wk.hist)].data() + x.offset(f);
          double lg = 0, lh = 0;
          std::size_t lc = 0;
          for (std::size_t c = 0; c + 1 < nb; ++c) {
            if (base[c].c == 0) continue;
            lg += base[c].g;
            lh += base[c].h;
            lc += base[c].c;
            consider(c, lg, lh, lc);
          }
        } else {
          const std::uint8_t* col = x.column(f);
          small.clear();
          for (std::uint32_t i : node_rows) small.push_back({col[i], g[i], h[i]});
          std::stable_sort(small.begin(), small.end(),
                           [](const BinStat& l, const BinStat& r) { return l.bin < r.bin; });
          double lg = 0, lh = 0;
          for (std::size_t k = 0; k < small.size(); ++k) {
            lg += small[k].a;
            lh += small[k].b;
            if (k + 1 < small.size() && small[k + 1].bin != small[k].bin)
              consider(static_cast<std::size_t>(small[k].bin), lg, lh, k + 1);
          }
        }
      }
      if (best.found) {
        split = true;
        std::size_t mid = 0;
        partition(rows, wk.begin, wk.end, x.column(best.feature), best.cut, scratch, mid);
        const int l = t.add_leaf(0.0);
        const int r = t.add_leaf(0.0);
        t.feature[node] = static_cast<int>(best.feature);
        t.threshold[node] = x.cuts(best.feature)[best.cut];
        t.left[node] = l;
        t.right[node] = r;
        const std::size_t nl = mid - wk.begin, nr = wk.end - mid;
        int hl = -1, hr = -1;
        if (wk.hist >= 0 && std::max(nl, nr) >= kHistMinRows) {
          const bool left_small = nl <= nr;
          const int hs_id = acquire();
          build(hs_id, left_small ? std::span<const std::uint32_t>(rows.data() + wk.begin, nl)
                                  : std::span<const std::uint32_t>(rows.data() + mid, nr));
          subtract(wk.hist, hs_id);
          int& small_h = left_small ? hl : hr;
          int& large_h = left_small ? hr : hl;
          large_h = wk.hist;
          if (std::min(nl, nr) >= kHistMinRows) small_h = hs_id;
          else release(hs_id);
        } else {
          release(wk.hist);
        }
        stack.push_back({r, mid, wk.end, wk.depth + 1, hr});
        stack.push_back({l, wk.begin, mid, wk.depth + 1, hl});
        continue;
      }
    }
    release(wk.hist);
    if (!split && row_values)
      for (std::size_t k = wk.begin; k < wk.end; ++k) (*row_values)[rows[k]] = t.value[node];
  }
  return t;
}

}  // namespace weakpol::tree
