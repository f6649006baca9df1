/*
 * Copyright 2026 The tncpt Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tncpt/boost.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <nlohmann/json.hpp>

#include "tncpt/csv.h"

namespace tncpt {

using nlohmann::ordered_json;

void BoostParams::Validate() const {
  if (iterations < 0) throw ConfigError("iterations must be non-negative");
  if (!(learning_rate > 0)) throw ConfigError("learning_rate must be positive");
  if (depth < 1) throw ConfigError("depth must be at least 1");
  if (!(bagging_temperature >= 0)) throw ConfigError("bagging_temperature must be >= 0");
  if (!(random_strength >= 0)) throw ConfigError("random_strength must be >= 0");
  if (!(column_sample_ratio > 0 && column_sample_ratio <= 1)) {
    throw ConfigError("column_sample_ratio must lie in (0, 1]");
  }
  if (min_data_in_leaf < 1) throw ConfigError("min_data_in_leaf must be at least 1");
  if (ordered_segments < 1) throw ConfigError("ordered_segments must be at least 1");
}

int Tree::LeafOf(const double* x) const {
  int n = 0;
  while (nodes[n].feature >= 0) {
    n = x[nodes[n].feature] <= nodes[n].threshold ? nodes[n].left : nodes[n].right;
  }
  return n;
}

int Tree::Depth() const {
  std::vector<int> depth(nodes.size(), 0);
  int max_depth = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].feature < 0) continue;
    depth[nodes[i].left] = depth[nodes[i].right] = depth[i] + 1;
    max_depth = std::max(max_depth, depth[i] + 1);
  }
  return max_depth;
}

double BoostModel::Predict(const double* x) const {
  double f = f0;
  for (const auto& t : trees) f += t.gamma * t.Evaluate(x);
  return f;
}

std::vector<double> BoostModel::PredictAll(const Matrix& x) const {
  if (x.cols != feature_names.size()) {
    throw InputError("feature count mismatch: model has " +
                     std::to_string(feature_names.size()) + ", input has " +
                     std::to_string(x.cols));
  }
  std::vector<double> out(x.rows);
  for (size_t i = 0; i < x.rows; ++i) out[i] = Predict(x.Row(i));
  return out;
}

std::vector<size_t> BoostModel::Remap(const std::vector<std::string>& names) const {
  std::vector<size_t> idx;
  for (const auto& f : feature_names) {
    const auto it = std::find(names.begin(), names.end(), f);
    if (it == names.end()) throw InputError("input lacks model feature '" + f + "'");
    idx.push_back(static_cast<size_t>(it - names.begin()));
  }
  return idx;
}

std::vector<double> BoostModel::PredictNamed(const Matrix& x,
                                             const std::vector<std::string>& names) const {
  return PredictAll(SelectColumns(x, Remap(names)));
}

std::string BoostModel::SchemaHash() const {
  std::string joined;
  for (const auto& n : feature_names) joined += n + "\n";
  return HexU64(Fnv1a64(joined));
}

namespace {

ordered_json NodeToJson(const Tree& t, int n) {
  const TreeNode& node = t.nodes[n];
  ordered_json j;
  if (node.feature < 0) {
    j["value"] = node.value;
    return j;
  }
  j["feature"] = node.feature;
  j["threshold"] = node.threshold;
  j["left"] = NodeToJson(t, node.left);
  j["right"] = NodeToJson(t, node.right);
  return j;
}

int NodeFromJson(const nlohmann::json& j, Tree& t, int n_features) {
  const int id = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  if (j.contains("value")) {
    t.nodes[id].value = j.at("value").get<double>();
    return id;
  }
  const int f = j.at("feature").get<int>();
  if (f < 0 || f >= n_features) throw InputError("model: feature index out of range");
  t.nodes[id].feature = f;
  t.nodes[id].threshold = j.at("threshold").get<double>();
  const int left = NodeFromJson(j.at("left"), t, n_features);
  const int right = NodeFromJson(j.at("right"), t, n_features);
  t.nodes[id].left = left;
  t.nodes[id].right = right;
  return id;
}

ordered_json ParamsToJson(const BoostParams& p) {
  ordered_json j;
  j["iterations"] = p.iterations;
  j["learning_rate"] = p.learning_rate;
  j["depth"] = p.depth;
  j["bagging_temperature"] = p.bagging_temperature;
  j["random_strength"] = p.random_strength;
  j["column_sample_ratio"] = p.column_sample_ratio;
  j["min_data_in_leaf"] = p.min_data_in_leaf;
  j["seed"] = p.seed;
  j["ordered_segments"] = p.ordered_segments;
  return j;
}

BoostParams ParamsFromJson(const nlohmann::json& j) {
  BoostParams p;
  p.iterations = j.at("iterations").get<int>();
  p.learning_rate = j.at("learning_rate").get<double>();
  p.depth = j.at("depth").get<int>();
  p.bagging_temperature = j.at("bagging_temperature").get<double>();
  p.random_strength = j.at("random_strength").get<double>();
  p.column_sample_ratio = j.at("column_sample_ratio").get<double>();
  p.min_data_in_leaf = j.at("min_data_in_leaf").get<int>();
  p.seed = j.at("seed").get<uint64_t>();
  p.ordered_segments = j.at("ordered_segments").get<int>();
  return p;
}

}  // namespace

std::string ModelToJson(const BoostModel& model) {
  ordered_json j;
  j["format"] = "tncpt-boost-1";
  j["feature_names"] = model.feature_names;
  j["schema_hash"] = model.SchemaHash();
  j["f0"] = model.f0;
  j["params"] = ParamsToJson(model.params);
  j["permutation"] = model.permutation;
  ordered_json trees = ordered_json::array();
  for (const auto& t : model.trees) {
    ordered_json tj;
    tj["gamma"] = t.gamma;
    tj["root"] = NodeToJson(t, 0);
    trees.push_back(std::move(tj));
  }
  j["trees"] = std::move(trees);
  return j.dump() + "\n";
}

BoostModel ModelFromJson(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "tncpt-boost-1") throw InputError("model: unknown format");
    BoostModel m;
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.f0 = j.at("f0").get<double>();
    m.params = ParamsFromJson(j.at("params"));
    m.permutation = j.at("permutation").get<std::vector<size_t>>();
    for (const auto& tj : j.at("trees")) {
      Tree t;
      t.gamma = tj.at("gamma").get<double>();
      NodeFromJson(tj.at("root"), t, static_cast<int>(m.feature_names.size()));
      m.trees.push_back(std::move(t));
    }
    if (j.at("schema_hash").get<std::string>() != m.SchemaHash()) {
      throw InputError("model: schema hash does not match feature names");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model: ") + e.what());
  }
}

namespace {

struct Split {
  double score = -std::numeric_limits<double>::infinity();
  int feature = -1;
  double threshold = 0.0;
};

// Grows a depthwise tree structure on weighted gradients; returns the nodes
// (leaf values unset) and each row's leaf.
std::vector<TreeNode> GrowStructure(const Matrix& x,
                                    const std::vector<std::vector<size_t>>& sorted,
                                    const std::vector<double>& g,
                                    const std::vector<double>& w,
                                    const std::vector<int>& features, int depth,
                                    int min_leaf, double noise_std, uint64_t noise_seed,
                                    std::vector<int>& node_of) {
  const size_t n = x.rows;
  std::vector<TreeNode> nodes(1);
  node_of.assign(n, 0);
  std::vector<int> active = {0};
  for (int level = 0; level < depth && !active.empty(); ++level) {
    const size_t n_nodes = nodes.size();
    std::vector<double> s_tot(n_nodes, 0.0), w_tot(n_nodes, 0.0);
    std::vector<size_t> c_tot(n_nodes, 0);
    std::vector<char> is_active(n_nodes, 0);
    for (int a : active) is_active[a] = 1;
    for (size_t i = 0; i < n; ++i) {
      const int nd = node_of[i];
      if (!is_active[nd]) continue;
      s_tot[nd] += w[i] * g[i];
      w_tot[nd] += w[i];
      ++c_tot[nd];
    }
    std::vector<Split> best(n_nodes);
    std::vector<double> s_left(n_nodes), w_left(n_nodes), last(n_nodes);
    std::vector<size_t> c_left(n_nodes);
    std::vector<Rng> noise;
    for (int f : features) {
      std::fill(s_left.begin(), s_left.end(), 0.0);
      std::fill(w_left.begin(), w_left.end(), 0.0);
      std::fill(c_left.begin(), c_left.end(), 0);
      noise.clear();
      for (size_t nd = 0; nd < n_nodes; ++nd) {
        noise.emplace_back(DeriveSeed(DeriveSeed(noise_seed, nd), static_cast<uint64_t>(f)));
      }
      for (size_t i : sorted[f]) {
        const int nd = node_of[i];
        if (!is_active[nd]) continue;
        const double v = x(i, f);
        const size_t cl = c_left[nd];
        if (cl > 0 && v > last[nd] && cl >= static_cast<size_t>(min_leaf) &&
            c_tot[nd] - cl >= static_cast<size_t>(min_leaf)) {
          const double wl = w_left[nd], wr = w_tot[nd] - wl;
          if (wl > 0 && wr > 0) {
            const double sl = s_left[nd], sr = s_tot[nd] - sl;
            double score = sl * sl / wl + sr * sr / wr - s_tot[nd] * s_tot[nd] / w_tot[nd];
            if (noise_std > 0) score += noise_std * noise[nd].Normal();
            if (score > best[nd].score) {
              double thr = last[nd] + (v - last[nd]) / 2.0;
              if (!(thr < v)) thr = last[nd];
              best[nd] = {score, f, thr};
            }
          }
        }
        s_left[nd] += w[i] * g[i];
        w_left[nd] += w[i];
        ++c_left[nd];
        last[nd] = v;
      }
    }
    std::vector<int> next;
    for (int a : active) {
      if (best[a].feature < 0 || !(best[a].score > 0.0)) continue;
      nodes[a].feature = best[a].feature;
      nodes[a].threshold = best[a].threshold;
      nodes[a].left = static_cast<int>(nodes.size());
      nodes[a].right = static_cast<int>(nodes.size() + 1);
      nodes.emplace_back();
      nodes.emplace_back();
      next.push_back(nodes[a].left);
      next.push_back(nodes[a].right);
    }
    for (size_t i = 0; i < n; ++i) {
      const TreeNode& nd = nodes[node_of[i]];
      if (nd.feature < 0) continue;
      node_of[i] = x(i, nd.feature) <= nd.threshold ? nd.left : nd.right;
    }
    active = std::move(next);
  }
  return nodes;
}

// Leaf values as weighted means of `r` over rows accepted by `use`, and the
// unweighted line-search step over the same rows.
template <typename Use>
std::pair<std::vector<double>, double> LeafValues(size_t n_nodes,
                                                  const std::vector<int>& leaf,
                                                  const std::vector<double>& r,
                                                  const std::vector<double>& w,
                                                  Use use) {
  std::vector<double> sum(n_nodes, 0.0), wsum(n_nodes, 0.0);
  for (size_t i = 0; i < r.size(); ++i) {
    if (!use(i)) continue;
    sum[leaf[i]] += w[i] * r[i];
    wsum[leaf[i]] += w[i];
  }
  std::vector<double> value(n_nodes, 0.0);
  for (size_t k = 0; k < n_nodes; ++k) {
    if (wsum[k] > 0) value[k] = sum[k] / wsum[k];
  }
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < r.size(); ++i) {
    if (!use(i)) continue;
    const double h = value[leaf[i]];
    num += r[i] * h;
    den += h * h;
  }
  return {value, den > 0 ? num / den : 0.0};
}

double Mse(const std::vector<double>& y, const std::vector<double>& pred) {
  double s = 0.0;
  for (size_t i = 0; i < y.size(); ++i) s += (y[i] - pred[i]) * (y[i] - pred[i]);
  return y.empty() ? 0.0 : s / static_cast<double>(y.size());
}

}  // namespace

BoostModel Fit(const Matrix& x, const std::vector<double>& y, const BoostParams& params,
               const std::vector<std::string>& feature_names, FitTrace* trace) {
  params.Validate();
  const size_t n = x.rows, p = x.cols;
  if (y.size() != n) throw InvariantError("target length differs from row count");
  if (!feature_names.empty() && feature_names.size() != p) {
    throw InvariantError("feature name count differs from column count");
  }
  if (n < 2 * static_cast<size_t>(params.min_data_in_leaf) || n == 0) {
    throw InputError("population too small: " + std::to_string(n) +
                     " rows, need at least " +
                     std::to_string(2 * params.min_data_in_leaf));
  }
  BoostModel model;
  model.params = params;
  model.feature_names = feature_names;
  if (model.feature_names.empty()) {
    for (size_t j = 0; j < p; ++j) model.feature_names.push_back("f" + std::to_string(j));
  }
  double sum = 0.0;
  for (double v : y) sum += v;
  model.f0 = sum / static_cast<double>(n);

  model.permutation.resize(n);
  std::iota(model.permutation.begin(), model.permutation.end(), 0);
  Rng perm_rng(DeriveSeed(params.seed, 1));
  perm_rng.Shuffle(model.permutation);
  const size_t k = std::min<size_t>(static_cast<size_t>(params.ordered_segments), n);
  std::vector<int> seg(n);
  for (size_t pos = 0; pos < n; ++pos) {
    seg[model.permutation[pos]] = static_cast<int>(pos * k / n);
  }

  std::vector<double> pred(n, model.f0);
  if (trace) {
    trace->train_mse = {Mse(y, pred)};
    trace->segment = seg;
  }
  const auto [y_min, y_max] = std::minmax_element(y.begin(), y.end());
  if (*y_min == *y_max || p == 0) return model;

  std::vector<std::vector<size_t>> sorted(p);
  for (size_t f = 0; f < p; ++f) {
    sorted[f].resize(n);
    std::iota(sorted[f].begin(), sorted[f].end(), 0);
    std::stable_sort(sorted[f].begin(), sorted[f].end(),
                     [&](size_t a, size_t b) { return x(a, f) < x(b, f); });
  }

  // prefix[j][i]: prediction of the model trained on segments < j. The
  // first segment has no predecessors and keeps F_0.
  std::vector<std::vector<double>> prefix(k, std::vector<double>(n, model.f0));
  for (size_t j = 1; j < k; ++j) {
    double s = 0.0;
    size_t c = 0;
    for (size_t i = 0; i < n; ++i) {
      if (static_cast<size_t>(seg[i]) < j) {
        s += y[i];
        ++c;
      }
    }
    std::fill(prefix[j].begin(), prefix[j].end(), s / static_cast<double>(c));
  }

  const size_t n_cols = std::max<size_t>(
      1, static_cast<size_t>(std::ceil(params.column_sample_ratio * static_cast<double>(p))));
  std::vector<double> g(n), w(n, 1.0), r(n);
  std::vector<int> leaf;
  for (int m = 0; m < params.iterations; ++m) {
    const uint64_t iter_seed = DeriveSeed(params.seed, 1000 + static_cast<uint64_t>(m));
    Rng rng(iter_seed);
    if (params.bagging_temperature > 0) {
      for (size_t i = 0; i < n; ++i) {
        double u = rng.Uniform();
        if (u <= 0.0) u = std::numeric_limits<double>::min();
        w[i] = std::pow(-std::log(u), params.bagging_temperature);
      }
    }
    for (size_t i = 0; i < n; ++i) g[i] = y[i] - prefix[seg[i]][i];

    std::vector<int> features(p);
    std::iota(features.begin(), features.end(), 0);
    if (n_cols < p) {
      rng.Shuffle(features);
      features.resize(n_cols);
      std::sort(features.begin(), features.end());
    }
    double noise_std = 0.0;
    if (params.random_strength > 0) {
      double sw = 0.0, sg = 0.0, sgg = 0.0;
      for (size_t i = 0; i < n; ++i) {
        const double ri = y[i] - pred[i];
        sw += w[i];
        sg += w[i] * ri;
        sgg += w[i] * ri * ri;
      }
      const double mean = sg / sw;
      noise_std = params.random_strength * std::max(0.0, sgg / sw - mean * mean);
    }

    Tree tree;
    tree.nodes = GrowStructure(x, sorted, g, w, features, params.depth,
                               params.min_data_in_leaf, noise_std,
                               DeriveSeed(iter_seed, 7), leaf);
    const size_t n_nodes = tree.nodes.size();

    for (size_t i = 0; i < n; ++i) r[i] = y[i] - pred[i];
    auto [values, step] = LeafValues(n_nodes, leaf, r, w, [](size_t) { return true; });
    tree.gamma = params.learning_rate * step;
    for (size_t nd = 0; nd < n_nodes; ++nd) {
      if (tree.nodes[nd].feature < 0) tree.nodes[nd].value = values[nd];
    }
    for (size_t i = 0; i < n; ++i) pred[i] += tree.gamma * values[leaf[i]];

    for (size_t j = 1; j < k; ++j) {
      for (size_t i = 0; i < n; ++i) r[i] = y[i] - prefix[j][i];
      auto [pv, pstep] = LeafValues(n_nodes, leaf, r, w, [&](size_t i) {
        return static_cast<size_t>(seg[i]) < j;
      });
      const double gamma_j = params.learning_rate * pstep;
      for (size_t i = 0; i < n; ++i) prefix[j][i] += gamma_j * pv[leaf[i]];
    }

    if (trace) {
      trace->train_mse.push_back(Mse(y, pred));
      if (trace->record_details) {
        trace->gradients.push_back(g);
        trace->weights.push_back(w);
        trace->leaves.push_back(leaf);
      }
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

EvalReport Evaluate(const std::vector<double>& predicted, const std::vector<double>& y) {
  if (predicted.size() != y.size()) throw InvariantError("prediction length mismatch");
  EvalReport e;
  if (y.empty()) return e;
  const double n = static_cast<double>(y.size());
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  double sse = 0.0, sae = 0.0, sst = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - predicted[i];
    sse += d * d;
    sae += std::abs(d);
    sst += (y[i] - mean) * (y[i] - mean);
  }
  e.mse = sse / n;
  e.mae = sae / n;
  e.rmse = std::sqrt(e.mse);
  e.r2 = sst > 0 ? 1.0 - sse / sst : (sse == 0 ? 1.0 : 0.0);
  return e;
}

std::vector<int> SpatialKFold(const std::vector<std::pair<int, int>>& axial, int k,
                              uint64_t seed) {
  if (k < 2) throw ConfigError("folds must be at least 2");
  const size_t n = axial.size();
  if (static_cast<size_t>(k) > n) {
    throw InputError("population too small: " + std::to_string(n) + " cells for " +
                     std::to_string(k) + " folds");
  }
  Rng rng(seed);
  const int axis = static_cast<int>(rng.UniformInt(0, 2));
  const int sign = rng.UniformInt(0, 1) == 0 ? 1 : -1;
  const auto cube = [&](size_t i, int a) {
    const int q = axial[i].first, r = axial[i].second;
    const int c[3] = {q, r, -q - r};
    return sign * c[a % 3];
  };
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const auto ka = std::make_tuple(cube(a, axis), cube(a, axis + 1), a);
    const auto kb = std::make_tuple(cube(b, axis), cube(b, axis + 1), b);
    return ka < kb;
  });
  std::vector<int> fold(n);
  const size_t base = n / k, extra = n % k;
  size_t pos = 0;
  for (int f = 0; f < k; ++f) {
    const size_t size = base + (static_cast<size_t>(f) < extra ? 1 : 0);
    for (size_t c = 0; c < size; ++c) fold[order[pos++]] = f;
  }
  return fold;
}

CvResult CrossValidate(const Matrix& x, const std::vector<double>& y,
                       const std::vector<int>& folds, const BoostParams& params) {
  if (folds.size() != x.rows) throw InvariantError("fold assignment length mismatch");
  const int k = folds.empty() ? 0 : *std::max_element(folds.begin(), folds.end()) + 1;
  CvResult cv;
  std::vector<double> oof(x.rows, 0.0);
  for (int f = 0; f < k; ++f) {
    std::vector<size_t> train, test;
    for (size_t i = 0; i < x.rows; ++i) (folds[i] == f ? test : train).push_back(i);
    if (test.empty()) continue;
    Matrix xt(train.size(), x.cols);
    std::vector<double> yt;
    for (size_t a = 0; a < train.size(); ++a) {
      for (size_t j = 0; j < x.cols; ++j) xt(a, j) = x(train[a], j);
      yt.push_back(y[train[a]]);
    }
    const BoostModel model = Fit(xt, yt, params);
    std::vector<double> pred, truth;
    for (size_t i : test) {
      oof[i] = model.Predict(x.Row(i));
      pred.push_back(oof[i]);
      truth.push_back(y[i]);
    }
    cv.folds.push_back(Evaluate(pred, truth));
  }
  cv.pooled = Evaluate(oof, y);
  return cv;
}

void SearchSpace::Validate() const {
  if (iterations_min < 0 || iterations_max < iterations_min ||
      !(learning_rate_min > 0) || learning_rate_max < learning_rate_min ||
      depth_min < 1 || depth_max < depth_min || bagging_temperature_min < 0 ||
      bagging_temperature_max < bagging_temperature_min || random_strength_min < 0 ||
      random_strength_max < random_strength_min || !(column_sample_ratio_min > 0) ||
      column_sample_ratio_max > 1 || column_sample_ratio_max < column_sample_ratio_min ||
      min_data_in_leaf_min < 1 || min_data_in_leaf_max < min_data_in_leaf_min) {
    throw ConfigError("invalid search space");
  }
}

bool SearchSpace::Contains(const BoostParams& p) const {
  return p.iterations >= iterations_min && p.iterations <= iterations_max &&
         p.learning_rate >= learning_rate_min && p.learning_rate <= learning_rate_max &&
         p.depth >= depth_min && p.depth <= depth_max &&
         p.bagging_temperature >= bagging_temperature_min &&
         p.bagging_temperature <= bagging_temperature_max &&
         p.random_strength >= random_strength_min &&
         p.random_strength <= random_strength_max &&
         p.column_sample_ratio >= column_sample_ratio_min &&
         p.column_sample_ratio <= column_sample_ratio_max &&
         p.min_data_in_leaf >= min_data_in_leaf_min &&
         p.min_data_in_leaf <= min_data_in_leaf_max;
}

SearchResult RandomSearch(const Matrix& x, const std::vector<double>& y,
                          const std::vector<int>& folds, const SearchSpace& space,
                          int trials, uint64_t seed, int jobs) {
  space.Validate();
  if (trials < 1) throw ConfigError("trials must be at least 1");
  SearchResult result;
  result.trials.resize(static_cast<size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(t)));
    BoostParams p;
    p.iterations = static_cast<int>(rng.UniformInt(space.iterations_min, space.iterations_max));
    p.learning_rate = rng.Uniform(space.learning_rate_min, space.learning_rate_max);
    p.depth = static_cast<int>(rng.UniformInt(space.depth_min, space.depth_max));
    p.bagging_temperature =
        rng.Uniform(space.bagging_temperature_min, space.bagging_temperature_max);
    p.random_strength = rng.Uniform(space.random_strength_min, space.random_strength_max);
    p.column_sample_ratio =
        rng.Uniform(space.column_sample_ratio_min, space.column_sample_ratio_max);
    p.min_data_in_leaf =
        static_cast<int>(rng.UniformInt(space.min_data_in_leaf_min, space.min_data_in_leaf_max));
    p.seed = rng.NextU64();
    result.trials[t].index = t;
    result.trials[t].params = p;
  }
  ParallelFor(result.trials.size(), jobs, [&](size_t t) {
    Trial& trial = result.trials[t];
    try {
      const CvResult cv = CrossValidate(x, y, folds, trial.params);
      trial.cv_mse = cv.pooled.mse;
      trial.cv_r2 = cv.pooled.r2;
    } catch (const InputError&) {
      trial.cv_mse = std::numeric_limits<double>::infinity();
      trial.cv_r2 = std::numeric_limits<double>::quiet_NaN();
    }
  });
  for (size_t t = 1; t < result.trials.size(); ++t) {
    if (result.trials[t].cv_mse < result.trials[result.best].cv_mse) result.best = t;
  }
  return result;
}

void WriteTrialsCsv(std::ostream& out, const SearchResult& result) {
  csv::WriteRecord(out, {"trial", "iterations", "learning_rate", "depth",
                         "bagging_temperature", "random_strength", "column_sample_ratio",
                         "min_data_in_leaf", "seed", "cv_mse", "cv_r2"});
  for (const auto& t : result.trials) {
    const auto& p = t.params;
    csv::WriteRecord(out, {std::to_string(t.index), std::to_string(p.iterations),
                           FormatDouble(p.learning_rate), std::to_string(p.depth),
                           FormatDouble(p.bagging_temperature),
                           FormatDouble(p.random_strength),
                           FormatDouble(p.column_sample_ratio),
                           std::to_string(p.min_data_in_leaf), std::to_string(p.seed),
                           FormatDouble(t.cv_mse), FormatDouble(t.cv_r2)});
  }
}

std::string CvReportJson(const CvResult& cv) {
  const auto report = [](const EvalReport& e) {
    ordered_json j;
    j["r2"] = e.r2;
    j["mae"] = e.mae;
    j["mse"] = e.mse;
    j["rmse"] = e.rmse;
    return j;
  };
  ordered_json folds = ordered_json::array();
  for (const auto& f : cv.folds) folds.push_back(report(f));
  ordered_json doc;
  doc["folds"] = std::move(folds);
  doc["pooled"] = report(cv.pooled);
  return doc.dump(2);
}

}  // namespace tncpt
