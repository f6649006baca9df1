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

// Run configuration: one YAML file, overridden by TNCPT_* environment
// variables, overridden in turn by command-line "--set key=value" pairs.
//
// Environment names map to dotted keys by stripping the prefix, lowercasing
// and reading "__" as the section separator:
//   TNCPT_CLASSIFIER__WALK_THRESHOLD_M=500  ->  classifier.walk_threshold_m

#ifndef TNCPT_CONFIG_H_
#define TNCPT_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tncpt/boost.h"
#include "tncpt/classify.h"
#include "tncpt/explain.h"
#include "tncpt/features.h"
#include "tncpt/ingest.h"
#include "tncpt/ptnet.h"
#include "tncpt/sensitivity.h"
#include "tncpt/synth.h"

namespace tncpt {

struct InputPaths {
  std::string trips;
  std::string stations;
  std::string routes;
  std::string fares;
  std::optional<std::string> population;
  std::optional<std::string> pois;
  std::optional<std::string> roads;
  std::optional<std::string> districts;
};

struct IngestConfig {
  SchemaConfig schema;
  double iqr_k = 3.0;
  bool per_day = false;
};

struct GridConfig {
  double side_km = 0.5;
  // Defaults to the bounds of the cleaned trip endpoints.
  std::optional<BoundingBox> bbox;
};

struct FeatureConfig {
  Target target = Target::kFcr;
  double vif_threshold = 10.0;
};

struct TrainConfig {
  int folds = 5;
  int trials = 20;
  SearchSpace space;
  // When set, the search is skipped and these parameters are used.
  std::optional<BoostParams> params;
};

struct ExplainConfig {
  ShapMode mode = ShapMode::kTree;
  size_t background = 100;
  int pdp_grid = 100;
  size_t top_k = 10;
};

struct RunConfig {
  std::string workdir = "tncpt_out";
  int jobs = 0;
  uint64_t seed = 0;
  InputPaths inputs;
  IngestConfig ingest;
  PlannerConfig planner;
  ClassifierConfig classifier;
  GridConfig grid;
  FeatureConfig features;
  TrainConfig train;
  ExplainConfig explain;
  std::vector<std::pair<SweepParameter, std::vector<double>>> elasticity = {
      {SweepParameter::kWalkThreshold, {300, 400, 500, 600, 700, 800}},
      {SweepParameter::kTimeGate, {10, 15, 20, 25, 30, 35, 40}},
      {SweepParameter::kMaxTransfers, {1, 2, 3, 4}},
      {SweepParameter::kCostRatio, {0.3, 0.4, 0.5, 0.6, 0.7}}};
};

// `path` may be empty (defaults only). Relative paths in the file resolve
// against the file's directory. Unknown keys and invalid values throw
// ConfigError.
RunConfig LoadConfig(const std::string& path,
                     const std::vector<std::string>& overrides = {},
                     const std::map<std::string, std::string>& env = {});

// TNCPT_* variables of the current process.
std::map<std::string, std::string> ConfigEnvironment();

// Effective configuration as YAML, for logging alongside outputs.
std::string DumpConfig(const RunConfig& config);

// Scenario spec from YAML; keys mirror ScenarioSpec field names with
// counts given as a map {first_mile, last_mile, substitutive, c1, c3, c4, c5, c6}.
ScenarioSpec LoadScenarioSpec(const std::string& path,
                              const std::vector<std::string>& overrides = {});

}  // namespace tncpt

#endif  // TNCPT_CONFIG_H_
