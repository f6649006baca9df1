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

// Pipeline stages over a work directory. Each stage reads upstream
// artifacts by path and writes its own outputs; a missing upstream artifact
// is an InputError naming the subcommand that produces it.
//
// Layout under the work directory:
//   ingest/     trips.csv rejections.jsonl iqr.json
//   plan/       alternatives.jsonl planner.json
//   classify/   classified.csv summary.json
//   grid/       cells.csv cells.geojson temporal.csv od_flows.csv
//               trip_stats.csv breakdown.csv
//   features/T/ features.csv selected.csv schema.json vif.json
//   train/T/    model.json cv.json trials.csv folds.csv
//   explain/T/  shap.csv importance.csv beeswarm.csv pdp.csv *.svg
//   elasticity/ elasticity.csv elasticity.svg
//   report/     bundled copies plus manifest.json and ratio maps

#ifndef TNCPT_PIPELINE_H_
#define TNCPT_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>

#include "tncpt/config.h"

namespace tncpt {

// Each stage returns a JSON summary (deterministic; no timings).
std::string RunIngest(const RunConfig& config);
std::string RunPlan(const RunConfig& config);
std::string RunClassify(const RunConfig& config);
std::string RunGridify(const RunConfig& config);
std::string RunFeatures(const RunConfig& config);
// `seed` drives the folds, the search and the final fit.
std::string RunTrain(const RunConfig& config, uint64_t seed);
std::string RunExplain(const RunConfig& config);
std::string RunElasticity(const RunConfig& config);
std::string RunReport(const RunConfig& config);

// Writes the scenario plus a config.yaml pointing at it (workdir "work").
std::string RunSynth(const ScenarioSpec& spec, const std::string& out_dir);

// Throws InputError("missing artifact ...") when `path` does not exist.
void RequireArtifact(const std::string& path, std::string_view producer);

}  // namespace tncpt

#endif  // TNCPT_PIPELINE_H_
