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


// The default synthetic scenario, planned and classified, plus brute-force
// recounts used as oracles for the grid aggregations.

#ifndef TNCPT_TESTS_SCENARIO_FIXTURE_H_
#define TNCPT_TESTS_SCENARIO_FIXTURE_H_

#include <array>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "tncpt/classify.h"
#include "tncpt/hexgrid.h"
#include "tncpt/ptnet.h"
#include "tncpt/synth.h"

namespace tncpt::testing {

struct PreparedScenario {
  Scenario scenario;
  std::unique_ptr<TransitNetwork> net;
  std::unique_ptr<Planner> planner;
  std::vector<PtAlternative> alts;
  std::vector<TripClass> classes;
  LabelLexicon lexicon;
};

inline std::unique_ptr<PreparedScenario> Prepare(const ScenarioSpec& spec,
                                                 const ClassifierConfig& cfg = {}) {
  auto p = std::make_unique<PreparedScenario>();
  p->scenario = GenerateScenario(spec);
  p->net = std::make_unique<TransitNetwork>(p->scenario.stations, p->scenario.routes,
                                            p->scenario.fares);
  p->planner = std::make_unique<Planner>(*p->net);
  AlternativeCache cache;
  p->alts = PlanAll(*p->planner, p->scenario.trips, cache);
  p->lexicon = StationLexicon(*p->net);
  p->classes = ClassifyAll(p->scenario.trips, p->alts, *p->net, p->lexicon, cfg);
  return p;
}

// Cell whose center is nearest in the projected plane; nullopt outside the
// bounding box. A hexagon is the Voronoi region of its center.
inline std::optional<size_t> NearestCell(const HexGrid& grid, const GeoPoint& p) {
  if (!grid.bbox().Contains(p)) return std::nullopt;
  const PlanePoint xy = grid.Project(p);
  std::optional<size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < grid.cells().size(); ++i) {
    const PlanePoint c = grid.CenterOf(grid.cells()[i].q, grid.cells()[i].r);
    const double d = (c.x - xy.x) * (c.x - xy.x) + (c.y - xy.y) * (c.y - xy.y);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

// Per cell: O, A, FC, LC, DS, AS.
using Recount = std::vector<std::array<size_t, 6>>;

inline Recount BruteRecount(const std::vector<TripRecord>& trips,
                            const std::vector<TripClass>& classes, const HexGrid& grid) {
  Recount out(grid.cells().size(), std::array<size_t, 6>{});
  for (size_t i = 0; i < trips.size(); ++i) {
    const TripLabel l = classes[i].label;
    if (const auto o = NearestCell(grid, trips[i].origin)) {
      out[*o][0] += 1;
      out[*o][2] += l == TripLabel::kFirstMile;
      out[*o][4] += l == TripLabel::kSubstitutive;
    }
    if (const auto d = NearestCell(grid, trips[i].destination)) {
      out[*d][1] += 1;
      out[*d][3] += l == TripLabel::kLastMile;
      out[*d][5] += l == TripLabel::kSubstitutive;
    }
  }
  return out;
}

inline bool SameCounts(const GridStats& stats, const Recount& r) {
  if (stats.cells.size() != r.size()) return false;
  for (size_t i = 0; i < r.size(); ++i) {
    const auto& c = stats.cells[i];
    const std::array<size_t, 6> got = {c.o, c.a, c.fc, c.lc, c.ds, c.as};
    if (got != r[i]) return false;
  }
  return true;
}

}  // namespace tncpt::testing

#endif  // TNCPT_TESTS_SCENARIO_FIXTURE_H_
