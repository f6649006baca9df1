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

// Gradient-boosted regression trees with ordered boosting, spatial block
// cross-validation and seeded random hyperparameter search.

#ifndef TNCPT_BOOST_H_
#define TNCPT_BOOST_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tncpt/features.h"

namespace tncpt {

struct BoostParams {
  int iterations = 500;
  double learning_rate = 0.03;
  int depth = 6;
  // Per-iteration sample weights (-log U)^T; 0 disables weighting.
  double bagging_temperature = 1.0;
  // Gaussian split-score noise with standard deviation random_strength times
  // the weighted variance of the current residuals y - F, so it fades as the
  // fit improves; 0 disables it.
  double random_strength = 1.0;
  double column_sample_ratio = 1.0;
  int min_data_in_leaf = 10;
  uint64_t seed = 0;
  // Number of permutation segments, i.e. prefix models used for ordered
  // gradients.
  int ordered_segments = 4;

  void Validate() const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf.
  double threshold = 0.0;  // Rows with x <= threshold go left.
  int left = -1;
  int right = -1;
  double value = 0.0;  // Leaf value before the step size.
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root.
  double gamma = 0.0;

  int LeafOf(const double* x) const;
  double Evaluate(const double* x) const { return nodes[LeafOf(x)].value; }
  int Depth() const;
};

struct BoostModel {
  std::vector<std::string> feature_names;
  double f0 = 0.0;
  std::vector<Tree> trees;
  std::vector<size_t> permutation;
  BoostParams params;

  // F(x) = F_0 + sum_m gamma_m h_m(x), with x in model feature order.
  double Predict(const double* x) const;
  std::vector<double> PredictAll(const Matrix& x) const;
  // Column of each model feature within `names`; throws InputError when a
  // feature is missing.
  std::vector<size_t> Remap(const std::vector<std::string>& names) const;
  // Predictions for a matrix whose columns are labelled by `names`.
  std::vector<double> PredictNamed(const Matrix& x,
                                   const std::vector<std::string>& names) const;
  std::string SchemaHash() const;
};

std::string ModelToJson(const BoostModel& model);
BoostModel ModelFromJson(const std::string& text);

struct FitTrace {
  bool record_details = false;
  std::vector<double> train_mse;  // Entry 0 is the F_0-only model.
  // Filled when record_details is set, one entry per iteration.
  std::vector<std::vector<double>> gradients;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<int>> leaves;
  std::vector<int> segment;  // Segment of each row.
};

// Throws InputError "population too small" when rows < 2 * min_data_in_leaf.
// A constant target yields F_0 and no trees.
BoostModel Fit(const Matrix& x, const std::vector<double>& y, const BoostParams& params,
               const std::vector<std::string>& feature_names = {},
               FitTrace* trace = nullptr);

struct EvalReport {
  double r2 = 0.0;
  double mae = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
};
EvalReport Evaluate(const std::vector<double>& predicted, const std::vector<double>& y);

// Contiguous spatial blocks: cells are ordered along a seed-chosen cube axis
// (ties by the next axis) and cut into k nearly equal runs.
std::vector<int> SpatialKFold(const std::vector<std::pair<int, int>>& axial, int k,
                              uint64_t seed);

struct CvResult {
  std::vector<EvalReport> folds;
  EvalReport pooled;  // Over all out-of-fold predictions.
};
CvResult CrossValidate(const Matrix& x, const std::vector<double>& y,
                       const std::vector<int>& folds, const BoostParams& params);

struct SearchSpace {
  int iterations_min = 100, iterations_max = 1000;
  double learning_rate_min = 0.001, learning_rate_max = 0.1;
  int depth_min = 1, depth_max = 10;
  double bagging_temperature_min = 0.0, bagging_temperature_max = 1.0;
  double random_strength_min = 0.0, random_strength_max = 1.0;
  double column_sample_ratio_min = 0.05, column_sample_ratio_max = 1.0;
  int min_data_in_leaf_min = 10, min_data_in_leaf_max = 100;

  void Validate() const;
  bool Contains(const BoostParams& p) const;
};

struct Trial {
  int index = 0;
  BoostParams params;
  double cv_mse = 0.0;  // Infinite when the trial could not be trained.
  double cv_r2 = 0.0;
};

struct SearchResult {
  std::vector<Trial> trials;
  size_t best = 0;  // Lowest cv_mse; ties keep the earliest trial.
};

// Each trial draws its parameters and training seed from DeriveSeed(seed,
// trial), so results do not depend on `jobs`.
SearchResult RandomSearch(const Matrix& x, const std::vector<double>& y,
                          const std::vector<int>& folds, const SearchSpace& space,
                          int trials, uint64_t seed, int jobs = 0);
void WriteTrialsCsv(std::ostream& out, const SearchResult& result);
std::string CvReportJson(const CvResult& cv);

}  // namespace tncpt

#endif  // TNCPT_BOOST_H_
