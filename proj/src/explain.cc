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

#include "tncpt/explain.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "tncpt/csv.h"
#include "tncpt/svg.h"

namespace tncpt {

ShapMode ParseShapMode(std::string_view s) {
  if (s == "exact") return ShapMode::kExact;
  if (s == "tree") return ShapMode::kTree;
  throw ConfigError("unknown SHAP mode '" + std::string(s) + "' (expected exact or tree)");
}

Matrix SampleBackground(const Matrix& x, size_t size, uint64_t seed) {
  std::vector<size_t> rows(x.rows);
  std::iota(rows.begin(), rows.end(), 0);
  if (x.rows > size) {
    Rng rng(seed);
    rng.Shuffle(rows);
    rows.resize(size);
    std::sort(rows.begin(), rows.end());
  }
  Matrix b(rows.size(), x.cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < x.cols; ++j) b(i, j) = x(rows[i], j);
  }
  return b;
}

namespace {

// weight[n][s] = s! (n - 1 - s)! / n!
std::vector<std::vector<double>> ShapleyWeights(size_t max_n) {
  std::vector<std::vector<double>> w(max_n + 1);
  for (size_t n = 1; n <= max_n; ++n) {
    w[n].resize(n);
    for (size_t s = 0; s < n; ++s) {
      // 1 / (n * C(n - 1, s))
      double c = 1.0;
      for (size_t i = 1; i <= s; ++i) {
        c = c * static_cast<double>(n - 1 - s + i) / static_cast<double>(i);
      }
      w[n][s] = 1.0 / (static_cast<double>(n) * c);
    }
  }
  return w;
}

void ExactRow(const BoostModel& model, const double* xr, const Matrix& bg,
              const std::vector<std::vector<double>>& weights, double* phi) {
  const size_t p = bg.cols;
  const size_t n_masks = size_t{1} << p;
  std::vector<double> value(n_masks, 0.0);
  std::vector<double> z(p);
  for (size_t mask = 0; mask < n_masks; ++mask) {
    double sum = 0.0;
    for (size_t b = 0; b < bg.rows; ++b) {
      for (size_t j = 0; j < p; ++j) z[j] = (mask >> j & 1) ? xr[j] : bg(b, j);
      sum += model.Predict(z.data());
    }
    value[mask] = sum / static_cast<double>(bg.rows);
  }
  for (size_t j = 0; j < p; ++j) {
    double acc = 0.0;
    for (size_t mask = 0; mask < n_masks; ++mask) {
      if (mask >> j & 1) continue;
      const size_t s = static_cast<size_t>(std::popcount(mask));
      acc += weights[p][s] * (value[mask | (size_t{1} << j)] - value[mask]);
    }
    phi[j] = acc;
  }
}

// Interventional attribution of one tree for one (sample, background) pair.
// `state[j]`: 0 undecided, 1 feature taken from the sample, 2 from the
// background.
void TreeWalk(const Tree& tree, int node, const double* xr, const double* br,
              std::vector<char>& state, std::vector<int>& from_x, std::vector<int>& from_b,
              const std::vector<std::vector<double>>& weights, double scale, double* phi) {
  const TreeNode& nd = tree.nodes[node];
  if (nd.feature < 0) {
    const size_t a = from_x.size(), c = from_b.size(), n = a + c;
    if (n == 0) return;
    const double v = scale * nd.value;
    if (a > 0) {
      const double pos = weights[n][a - 1] * v;
      for (int j : from_x) phi[j] += pos;
    }
    if (c > 0) {
      const double neg = weights[n][a] * v;
      for (int j : from_b) phi[j] -= neg;
    }
    return;
  }
  const int f = nd.feature;
  const int x_child = xr[f] <= nd.threshold ? nd.left : nd.right;
  const int b_child = br[f] <= nd.threshold ? nd.left : nd.right;
  if (x_child == b_child) {
    TreeWalk(tree, x_child, xr, br, state, from_x, from_b, weights, scale, phi);
  } else if (state[f] == 1) {
    TreeWalk(tree, x_child, xr, br, state, from_x, from_b, weights, scale, phi);
  } else if (state[f] == 2) {
    TreeWalk(tree, b_child, xr, br, state, from_x, from_b, weights, scale, phi);
  } else {
    state[f] = 1;
    from_x.push_back(f);
    TreeWalk(tree, x_child, xr, br, state, from_x, from_b, weights, scale, phi);
    from_x.pop_back();
    state[f] = 2;
    from_b.push_back(f);
    TreeWalk(tree, b_child, xr, br, state, from_x, from_b, weights, scale, phi);
    from_b.pop_back();
    state[f] = 0;
  }
}

}  // namespace

ShapMatrix ShapValues(const BoostModel& model, const Matrix& x, const Matrix& background,
                      ShapMode mode, int jobs) {
  const size_t p = model.feature_names.size();
  if (x.cols != p || background.cols != p) {
    throw InputError("feature count mismatch between model and data");
  }
  if (background.rows == 0) throw InputError("background set is empty");
  if (mode == ShapMode::kExact && p > kMaxExactFeatures) {
    throw ConfigError("exact SHAP supports at most 20 features; use tree mode");
  }
  ShapMatrix out;
  out.names = model.feature_names;
  out.x = x;
  out.values = Matrix(x.rows, p);
  out.predictions = model.PredictAll(x);
  double base = 0.0;
  for (size_t b = 0; b < background.rows; ++b) base += model.Predict(background.Row(b));
  out.base_value = base / static_cast<double>(background.rows);

  size_t max_n = p;
  for (const auto& t : model.trees) max_n = std::max<size_t>(max_n, t.Depth());
  const auto weights = ShapleyWeights(std::max<size_t>(max_n, 1));
  const double inv_b = 1.0 / static_cast<double>(background.rows);

  ParallelFor(x.rows, jobs, [&](size_t i) {
    double* phi = &out.values.data[i * p];
    if (mode == ShapMode::kExact) {
      ExactRow(model, x.Row(i), background, weights, phi);
      return;
    }
    std::vector<double> acc(p, 0.0);
    std::vector<char> state(p, 0);
    std::vector<int> from_x, from_b;
    for (size_t b = 0; b < background.rows; ++b) {
      for (const auto& t : model.trees) {
        TreeWalk(t, 0, x.Row(i), background.Row(b), state, from_x, from_b, weights,
                 t.gamma, acc.data());
      }
    }
    for (size_t j = 0; j < p; ++j) phi[j] = acc[j] * inv_b;
  });
  return out;
}

std::vector<size_t> ImportanceReport::Ranking() const {
  std::vector<size_t> order(mean_abs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return mean_abs[a] > mean_abs[b]; });
  return order;
}

ImportanceReport Importance(const ShapMatrix& shap) {
  ImportanceReport r;
  r.names = shap.names;
  const size_t p = shap.values.cols, n = shap.values.rows;
  r.mean_abs.assign(p, 0.0);
  for (size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += std::abs(shap.values(i, j));
    r.mean_abs[j] = n == 0 ? 0.0 : s / static_cast<double>(n);
  }
  double total = 0.0;
  for (double a : r.mean_abs) total += a;
  r.relative_pct.assign(p, 0.0);
  if (total > 0) {
    for (size_t j = 0; j < p; ++j) r.relative_pct[j] = 100.0 * r.mean_abs[j] / total;
  }
  return r;
}

PdpCurve PartialDependence(const BoostModel& model, const Matrix& x, size_t feature,
                           int n_grid, int jobs) {
  if (feature >= x.cols) throw InputError("PDP feature index out of range");
  if (n_grid < 1) throw ConfigError("PDP grid needs at least one interval");
  PdpCurve c;
  c.feature = feature < model.feature_names.size() ? model.feature_names[feature]
                                                   : "f" + std::to_string(feature);
  if (x.rows == 0) return c;
  std::vector<double> col(x.rows);
  for (size_t i = 0; i < x.rows; ++i) col[i] = x(i, feature);
  std::sort(col.begin(), col.end());
  const double lo = col.front(), hi = col.back();
  const double p95 = QuantileSorted(col, 0.95);
  for (int k = 0; k <= n_grid; ++k) {
    const double v = k == n_grid ? hi : lo + (hi - lo) * k / n_grid;
    c.grid.push_back(v);
    c.dense.push_back(v <= p95);
  }
  c.values.assign(c.grid.size(), 0.0);
  ParallelFor(c.grid.size(), jobs, [&](size_t k) {
    std::vector<double> z(x.cols);
    double s = 0.0;
    for (size_t i = 0; i < x.rows; ++i) {
      std::copy(x.Row(i), x.Row(i) + x.cols, z.begin());
      z[feature] = c.grid[k];
      s += model.Predict(z.data());
    }
    c.values[k] = s / static_cast<double>(x.rows);
  });
  return c;
}

namespace {

// Average rank of each value scaled to [0, 1].
std::vector<double> ScaledRanks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(n, 0.0);
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0;
    for (size_t k = i; k <= j; ++k) rank[order[k]] = n > 1 ? avg / (n - 1) : 0.5;
    i = j + 1;
  }
  return rank;
}

std::vector<size_t> TopFeatures(const ImportanceReport& imp, size_t top_k) {
  auto order = imp.Ranking();
  if (order.size() > top_k) order.resize(top_k);
  return order;
}

}  // namespace

void WriteBeeswarmCsv(std::ostream& out, const ShapMatrix& shap,
                      const ImportanceReport& imp, size_t top_k) {
  csv::WriteRecord(out, {"feature", "shap_value", "feature_value_rank"});
  for (size_t j : TopFeatures(imp, top_k)) {
    std::vector<double> col(shap.x.rows);
    for (size_t i = 0; i < shap.x.rows; ++i) col[i] = shap.x(i, j);
    const auto rank = ScaledRanks(col);
    for (size_t i = 0; i < shap.values.rows; ++i) {
      csv::WriteRecord(out, {shap.names[j], FormatDouble(shap.values(i, j)),
                             FormatDouble(rank[i])});
    }
  }
}

void WriteImportanceCsv(std::ostream& out, const ImportanceReport& imp) {
  csv::WriteRecord(out, {"feature", "mean_abs_shap", "relative_importance_pct"});
  for (size_t j : imp.Ranking()) {
    csv::WriteRecord(out, {imp.names[j], FormatDouble(imp.mean_abs[j]),
                           FormatDouble(imp.relative_pct[j])});
  }
}

void WritePdpCsv(std::ostream& out, const std::vector<PdpCurve>& curves) {
  csv::WriteRecord(out, {"feature", "x", "pdp", "dense"});
  for (const auto& c : curves) {
    for (size_t k = 0; k < c.grid.size(); ++k) {
      csv::WriteRecord(out, {c.feature, FormatDouble(c.grid[k]), FormatDouble(c.values[k]),
                             c.dense[k] ? "1" : "0"});
    }
  }
}

std::string BeeswarmSvg(const ShapMatrix& shap, const ImportanceReport& imp,
                        size_t top_k, uint64_t seed) {
  SvgDoc svg(800, 600);
  svg.Text(400, 30, "SHAP values (top features)", 16, "middle");
  const auto top = TopFeatures(imp, top_k);
  if (top.empty() || shap.values.rows == 0) {
    svg.Text(400, 300, "no data", 14, "middle");
    return svg.Str();
  }
  double lo = 0.0, hi = 0.0;
  for (size_t j : top) {
    for (size_t i = 0; i < shap.values.rows; ++i) {
      lo = std::min(lo, shap.values(i, j));
      hi = std::max(hi, shap.values(i, j));
    }
  }
  const double left = 220, right = 770, top_y = 60, bottom = 560;
  const LinearScale sx{lo, hi, left, right};
  const double row_h = (bottom - top_y) / static_cast<double>(top.size());
  svg.Line(sx(0.0), top_y, sx(0.0), bottom, "#888888");
  Rng rng(seed);
  for (size_t r = 0; r < top.size(); ++r) {
    const size_t j = top[r];
    const double cy = top_y + row_h * (r + 0.5);
    svg.Text(left - 10, cy + 4, shap.names[j], 12, "end");
    std::vector<double> col(shap.x.rows);
    for (size_t i = 0; i < shap.x.rows; ++i) col[i] = shap.x(i, j);
    const auto rank = ScaledRanks(col);
    for (size_t i = 0; i < shap.values.rows; ++i) {
      const double jitter = (rng.Uniform() - 0.5) * row_h * 0.6;
      svg.Circle(sx(shap.values(i, j)), cy + jitter, 2.0, RampColor(rank[i]));
    }
  }
  svg.Text(left, 590, SvgNum(lo), 11, "start");
  svg.Text(right, 590, SvgNum(hi), 11, "end");
  return svg.Str();
}

std::string ImportanceSvg(const ImportanceReport& imp, size_t top_k) {
  SvgDoc svg(800, 600);
  svg.Text(400, 30, "Relative importance (%)", 16, "middle");
  const auto top = TopFeatures(imp, top_k);
  if (top.empty()) {
    svg.Text(400, 300, "no data", 14, "middle");
    return svg.Str();
  }
  double hi = 0.0;
  for (size_t j : top) hi = std::max(hi, imp.relative_pct[j]);
  const double left = 220, right = 740, top_y = 60, bottom = 560;
  const LinearScale sx{0.0, hi > 0 ? hi : 1.0, left, right};
  const double row_h = (bottom - top_y) / static_cast<double>(top.size());
  for (size_t r = 0; r < top.size(); ++r) {
    const size_t j = top[r];
    const double y = top_y + row_h * r;
    svg.Text(left - 10, y + row_h / 2 + 4, imp.names[j], 12, "end");
    svg.Rect(left, y + row_h * 0.15, sx(imp.relative_pct[j]) - left, row_h * 0.7, "#4a78b5");
    svg.Text(sx(imp.relative_pct[j]) + 5, y + row_h / 2 + 4, SvgNum(imp.relative_pct[j]), 11);
  }
  return svg.Str();
}

std::string PdpSvg(const PdpCurve& c) {
  SvgDoc svg(800, 600);
  svg.Text(400, 30, "Partial dependence: " + c.feature, 16, "middle");
  if (c.grid.empty()) {
    svg.Text(400, 300, "no data", 14, "middle");
    return svg.Str();
  }
  const auto [ylo, yhi] = std::minmax_element(c.values.begin(), c.values.end());
  const double left = 80, right = 760, top_y = 60, bottom = 540;
  const LinearScale sx{c.grid.front(), c.grid.back(), left, right};
  const LinearScale sy{*ylo, *yhi, bottom, top_y};
  svg.Line(left, bottom, right, bottom, "#333333");
  svg.Line(left, bottom, left, top_y, "#333333");
  std::vector<std::pair<double, double>> solid, dashed;
  for (size_t k = 0; k < c.grid.size(); ++k) {
    const std::pair<double, double> pt{sx(c.grid[k]), sy(c.values[k])};
    if (c.dense[k]) {
      solid.push_back(pt);
    } else {
      if (dashed.empty() && !solid.empty()) dashed.push_back(solid.back());
      dashed.push_back(pt);
    }
  }
  svg.Polyline(solid, "#c0392b", 2.0, false);
  svg.Polyline(dashed, "#c0392b", 2.0, true);
  svg.Text(left, 565, SvgNum(c.grid.front()), 11, "start");
  svg.Text(right, 565, SvgNum(c.grid.back()), 11, "end");
  svg.Text(left - 5, bottom, SvgNum(*ylo), 11, "end");
  svg.Text(left - 5, top_y + 4, SvgNum(*yhi), 11, "end");
  return svg.Str();
}

}  // namespace tncpt
