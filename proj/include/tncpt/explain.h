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

// Shapley attributions, importance shares and partial dependence for a
// fitted boosted model, plus CSV/SVG export.

#ifndef TNCPT_EXPLAIN_H_
#define TNCPT_EXPLAIN_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "tncpt/boost.h"
#include "tncpt/features.h"

namespace tncpt {

enum class ShapMode { kExact, kTree };
ShapMode ParseShapMode(std::string_view s);

inline constexpr size_t kMaxExactFeatures = 20;

struct ShapMatrix {
  std::vector<std::string> names;
  double base_value = 0.0;  // Mean prediction over the background rows.
  Matrix values;            // rows = samples, cols = features.
  Matrix x;                 // The explained samples.
  std::vector<double> predictions;
};

// Up to `size` distinct rows drawn with a fixed seed, in ascending order.
Matrix SampleBackground(const Matrix& x, size_t size, uint64_t seed);

// Interventional value function: f(S) averages the model over background
// rows with features in S taken from the sample. Exact mode enumerates all
// subsets; tree mode walks each tree once per background row, splitting
// the walk wherever sample and background disagree.
ShapMatrix ShapValues(const BoostModel& model, const Matrix& x, const Matrix& background,
                      ShapMode mode, int jobs = 0);

struct ImportanceReport {
  std::vector<std::string> names;
  std::vector<double> mean_abs;     // A_j
  std::vector<double> relative_pct; // P_j, sums to 100 unless all A_j are 0.
  // Feature indices by decreasing A_j; ties keep the lower index first.
  std::vector<size_t> Ranking() const;
};
ImportanceReport Importance(const ShapMatrix& shap);

struct PdpCurve {
  std::string feature;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<bool> dense;  // grid value <= 95th percentile of the feature.
};

// n_grid intervals over the observed range of `feature` (n_grid + 1 points).
PdpCurve PartialDependence(const BoostModel& model, const Matrix& x, size_t feature,
                           int n_grid = 100, int jobs = 0);

// feature,shap_value,feature_value_rank for the top `top_k` features.
void WriteBeeswarmCsv(std::ostream& out, const ShapMatrix& shap,
                      const ImportanceReport& imp, size_t top_k = 10);
void WriteImportanceCsv(std::ostream& out, const ImportanceReport& imp);
void WritePdpCsv(std::ostream& out, const std::vector<PdpCurve>& curves);

std::string BeeswarmSvg(const ShapMatrix& shap, const ImportanceReport& imp,
                        size_t top_k = 10, uint64_t seed = 0);
std::string ImportanceSvg(const ImportanceReport& imp, size_t top_k = 10);
std::string PdpSvg(const PdpCurve& curve);

}  // namespace tncpt

#endif  // TNCPT_EXPLAIN_H_
