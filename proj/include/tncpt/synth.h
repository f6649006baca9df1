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

// Seeded synthetic city: transit network, ride-hailing trips with planted
// classes, and the auxiliary layers used for the explanatory variables.

#ifndef TNCPT_SYNTH_H_
#define TNCPT_SYNTH_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tncpt/classify.h"
#include "tncpt/features.h"
#include "tncpt/ptnet.h"

namespace tncpt {

// Planted trip categories: the four labels, with Independent split by the
// condition it violates.
enum class PlantedKind {
  kFirstMile,
  kLastMile,
  kSubstitutive,
  kViolateC1,
  kViolateC3,
  kViolateC4,
  kViolateC5,
  kViolateC6,
};
inline constexpr int kNumPlantedKinds = 8;

struct ScenarioSpec {
  uint64_t seed = 1;
  GeoPoint center{121.40, 31.20};
  double half_size_km = 10.0;
  int metro_lines = 4;    // Up to 4: two east-west, two north-south.
  bool bus_routes = true;  // Two crossing trunk routes.
  bool bus_chain = true;   // Four-route peripheral chain (3-transfer trips).
  double metro_headway_min = 5.0;
  double bus_headway_min = 10.0;
  double metro_speed_kmh = 35.0;
  double bus_speed_kmh = 18.0;
  // Planted counts indexed by PlantedKind.
  std::array<int, kNumPlantedKinds> counts = {450, 480, 900, 300, 1350, 700, 150, 670};
  int days = 3;
  std::string start_date = "2022/9/5";
  // Relative departure weight of each daytime hour.
  // Hours outside 06-21 must stay at zero.
  std::array<double, 24> hour_weights = {0, 0, 0, 0, 0, 0, 1, 3, 5, 3, 2, 2,
                                         2, 2, 2, 2, 3, 4, 5, 3, 2, 1, 0, 0};
  bool with_request_time = true;
  // When set, substitutive trips cost exactly fare / share.
  std::optional<double> substitutive_fare_share;
  bool auxiliary_layers = true;  // Population, POIs, roads, districts.
};

struct GroundTruth {
  TripLabel label = TripLabel::kIndependent;
  std::optional<Condition> violated;
};

struct Scenario {
  std::vector<Station> stations;
  std::vector<Route> routes;
  FareRules fares;
  std::vector<TripRecord> trips;  // Sorted by pickup time.
  std::vector<GroundTruth> truth;
  std::vector<RasterCell> population;
  std::vector<Poi> pois;
  std::string roads_geojson;
  std::string districts_geojson;
  BoundingBox bbox;
};

// Throws ConfigError when the scenario spec cannot be realized (for example feeder
// trips without stations, or a class no sampled OD can satisfy).
Scenario GenerateScenario(const ScenarioSpec& spec);

// Writes stations.csv, routes.csv, fares.txt, trips.csv, ground_truth.csv
// and, when present, population.csv, pois.csv, roads.geojson and
// districts.geojson under `dir`.
void WriteScenario(const Scenario& s, const std::string& dir);

// trip_index,intended_class,violated_condition
void WriteGroundTruthCsv(std::ostream& out, const std::vector<GroundTruth>& truth);
std::vector<GroundTruth> ReadGroundTruthCsv(std::istream& in);

}  // namespace tncpt

#endif  // TNCPT_SYNTH_H_
