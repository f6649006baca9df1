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

// Threshold sweeps of the substitutive ratio and baseline-anchored arc
// elasticities.

#ifndef TNCPT_SENSITIVITY_H_
#define TNCPT_SENSITIVITY_H_

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tncpt/classify.h"

namespace tncpt {

enum class SweepParameter { kWalkThreshold, kTimeGate, kMaxTransfers, kCostRatio };
std::string_view SweepParameterName(SweepParameter p);
SweepParameter ParseSweepParameter(std::string_view s);
double ParameterValue(const ClassifierConfig& cfg, SweepParameter p);
// Throws ConfigError for non-positive values and non-integer transfer counts.
ClassifierConfig WithParameter(ClassifierConfig cfg, SweepParameter p, double value);

struct ElasticityPoint {
  double value = 0.0;
  double substitutive_ratio = 0.0;
  // (dR / R0) / (dv / v0); undefined at the baseline or when R0 = 0.
  std::optional<double> arc_elasticity;
};

struct ElasticityReport {
  SweepParameter parameter = SweepParameter::kWalkThreshold;
  double baseline = 0.0;
  double baseline_ratio = 0.0;
  std::vector<ElasticityPoint> points;
};

// Reclassifies every trip at each value using the prepared alternatives.
// `values` must contain the baseline value of `baseline`.
ElasticityReport ElasticitySweep(const std::vector<TripRecord>& trips,
                                 const std::vector<PtAlternative>& alts,
                                 const TransitNetwork& net, const LabelLexicon& lexicon,
                                 const ClassifierConfig& baseline, SweepParameter parameter,
                                 const std::vector<double>& values, int jobs = 0);

// parameter,value,substitutive_ratio,arc_elasticity
void WriteElasticityCsv(std::ostream& out, const std::vector<ElasticityReport>& reports);
std::string ElasticitySvg(const std::vector<ElasticityReport>& reports);

}  // namespace tncpt

#endif  // TNCPT_SENSITIVITY_H_
