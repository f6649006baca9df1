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

#include "tncpt/sensitivity.h"

#include <algorithm>
#include <cmath>

#include "tncpt/csv.h"
#include "tncpt/svg.h"

namespace tncpt {

namespace {
constexpr std::string_view kParamNames[] = {"walk_threshold_m", "time_gate_min",
                                            "max_transfers", "cost_ratio"};
}  // namespace

std::string_view SweepParameterName(SweepParameter p) {
  return kParamNames[static_cast<int>(p)];
}

SweepParameter ParseSweepParameter(std::string_view s) {
  for (int i = 0; i < 4; ++i) {
    if (kParamNames[i] == s) return static_cast<SweepParameter>(i);
  }
  throw ConfigError("unknown sweep parameter '" + std::string(s) + "'");
}

double ParameterValue(const ClassifierConfig& cfg, SweepParameter p) {
  switch (p) {
    case SweepParameter::kWalkThreshold: return cfg.walk_threshold_m;
    case SweepParameter::kTimeGate: return cfg.time_gate_min;
    case SweepParameter::kMaxTransfers: return cfg.max_transfers;
    case SweepParameter::kCostRatio: return cfg.cost_ratio;
  }
  return 0.0;
}

ClassifierConfig WithParameter(ClassifierConfig cfg, SweepParameter p, double value) {
  if (!(value > 0)) {
    throw ConfigError(std::string(SweepParameterName(p)) +
                      " sweep values must be positive, got " + FormatDouble(value));
  }
  switch (p) {
    case SweepParameter::kWalkThreshold: cfg.walk_threshold_m = value; break;
    case SweepParameter::kTimeGate: cfg.time_gate_min = value; break;
    case SweepParameter::kMaxTransfers:
      if (value != std::floor(value)) {
        throw ConfigError("max_transfers sweep values must be integers");
      }
      cfg.max_transfers = static_cast<int>(value);
      break;
    case SweepParameter::kCostRatio: cfg.cost_ratio = value; break;
  }
  cfg.Validate();
  return cfg;
}

ElasticityReport ElasticitySweep(const std::vector<TripRecord>& trips,
                                 const std::vector<PtAlternative>& alts,
                                 const TransitNetwork& net, const LabelLexicon& lexicon,
                                 const ClassifierConfig& baseline, SweepParameter parameter,
                                 const std::vector<double>& values, int jobs) {
  baseline.Validate();
  ElasticityReport report;
  report.parameter = parameter;
  report.baseline = ParameterValue(baseline, parameter);
  if (std::find(values.begin(), values.end(), report.baseline) == values.end()) {
    throw ConfigError(std::string(SweepParameterName(parameter)) +
                      " sweep must include the baseline value " +
                      FormatDouble(report.baseline));
  }
  std::vector<ClassifierConfig> configs;
  for (double v : values) configs.push_back(WithParameter(baseline, parameter, v));

  report.points.resize(values.size());
  ParallelFor(values.size(), jobs, [&](size_t k) {
    const auto classes = ClassifyAll(trips, alts, net, lexicon, configs[k], 1);
    report.points[k].value = values[k];
    report.points[k].substitutive_ratio = Summarize(classes).Share(TripLabel::kSubstitutive);
  });
  for (const auto& pt : report.points) {
    if (pt.value == report.baseline) report.baseline_ratio = pt.substitutive_ratio;
  }
  const double r0 = report.baseline_ratio, v0 = report.baseline;
  for (auto& pt : report.points) {
    if (pt.value == v0 || r0 == 0.0) continue;
    pt.arc_elasticity = ((pt.substitutive_ratio - r0) / r0) / ((pt.value - v0) / v0);
  }
  return report;
}

void WriteElasticityCsv(std::ostream& out, const std::vector<ElasticityReport>& reports) {
  csv::WriteRecord(out, {"parameter", "value", "substitutive_ratio", "arc_elasticity"});
  for (const auto& r : reports) {
    for (const auto& pt : r.points) {
      csv::WriteRecord(out, {std::string(SweepParameterName(r.parameter)),
                             FormatDouble(pt.value), FormatDouble(pt.substitutive_ratio),
                             pt.arc_elasticity ? FormatDouble(*pt.arc_elasticity) : ""});
    }
  }
}

std::string ElasticitySvg(const std::vector<ElasticityReport>& reports) {
  SvgDoc svg(800, 600);
  svg.Text(400, 24, "Substitutive ratio by threshold", 16, "middle");
  if (reports.empty()) {
    svg.Text(400, 300, "no data", 14, "middle");
    return svg.Str();
  }
  const size_t n = reports.size();
  const size_t cols = n == 1 ? 1 : 2;
  const size_t rows = (n + cols - 1) / cols;
  const double pw = 800.0 / cols, ph = 560.0 / rows;
  for (size_t k = 0; k < n; ++k) {
    const auto& r = reports[k];
    const double ox = pw * (k % cols), oy = 40 + ph * (k / cols);
    const double left = ox + 60, right = ox + pw - 20, top = oy + 30, bottom = oy + ph - 40;
    svg.Text((left + right) / 2, oy + 18, std::string(SweepParameterName(r.parameter)), 13,
             "middle");
    svg.Line(left, bottom, right, bottom, "#333333");
    svg.Line(left, bottom, left, top, "#333333");
    if (r.points.empty()) continue;
    double xlo = r.points.front().value, xhi = xlo, yhi = 0.0;
    for (const auto& pt : r.points) {
      xlo = std::min(xlo, pt.value);
      xhi = std::max(xhi, pt.value);
      yhi = std::max(yhi, pt.substitutive_ratio);
    }
    const LinearScale sx{xlo, xhi, left, right};
    const LinearScale sy{0.0, yhi > 0 ? yhi : 1.0, bottom, top};
    auto sorted = r.points;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.value < b.value; });
    std::vector<std::pair<double, double>> pts;
    for (const auto& pt : sorted) {
      pts.push_back({sx(pt.value), sy(pt.substitutive_ratio)});
      svg.Circle(pts.back().first, pts.back().second, 3.0,
                 pt.value == r.baseline ? "#c0392b" : "#2c3e50");
    }
    svg.Polyline(pts, "#2c3e50", 1.5);
    svg.Text(left, bottom + 16, FormatDouble(xlo), 10, "start");
    svg.Text(right, bottom + 16, FormatDouble(xhi), 10, "end");
    svg.Text(left - 4, top + 4, SvgNum(yhi), 10, "end");
  }
  return svg.Str();
}

}  // namespace tncpt
