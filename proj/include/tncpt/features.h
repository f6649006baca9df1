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

// Per-cell explanatory variables: population, transit accessibility, road
// network structure, ride-hailing travel and points of interest, followed by
// variance-inflation screening.

#ifndef TNCPT_FEATURES_H_
#define TNCPT_FEATURES_H_

#include <array>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tncpt/classify.h"
#include "tncpt/hexgrid.h"
#include "tncpt/ptnet.h"

namespace tncpt {

enum class Target { kFcr, kLcr, kDsr, kAsr };
std::string_view TargetName(Target t);
Target ParseTarget(std::string_view s);
// FCR and DSR aggregate by origin cell, LCR and ASR by destination cell.
inline bool IsDepartureTarget(Target t) { return t == Target::kFcr || t == Target::kDsr; }

struct FeatureSpec {
  std::string_view name;
  std::string_view unit;
  std::string_view definition;
};

inline constexpr int kNumFeatures = 19;
// Canonical column order.
extern const std::array<FeatureSpec, kNumFeatures> kFeatureSpecs;

// Dense row-major matrix.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  double& operator()(size_t r, size_t c) { return data[r * cols + c]; }
  double operator()(size_t r, size_t c) const { return data[r * cols + c]; }
  const double* Row(size_t r) const { return data.data() + r * cols; }
};

struct RasterCell {
  GeoPoint location;  // Raster cell center.
  double pop = 0.0;
};
std::vector<RasterCell> ReadPopulationCsv(std::istream& in);

struct Poi {
  GeoPoint location;
  std::string category;
};
std::vector<Poi> ReadPoisCsv(std::istream& in);
inline constexpr std::string_view kPoiCategories[] = {"residence", "retail",
                                                      "catering", "enterprise"};

struct RoadEdge {
  size_t u = 0;
  size_t v = 0;
  bool highway = false;
  std::vector<GeoPoint> shape;  // Polyline from node u to node v.
  double length_km = 0.0;
};

// Junction graph from line strings: line-string endpoints become nodes
// (coincident endpoints merge), each line string an edge.
struct RoadGraph {
  std::vector<GeoPoint> nodes;
  std::vector<RoadEdge> edges;
};
RoadGraph ReadRoadsGeoJson(std::istream& in);

struct RoadMetrics {
  double avg_clustering = 0.0;
  double avg_centrality = 0.0;
  double road_km = 0.0;
  double highway_km = 0.0;
};

// Clustering C(v) = 2 E_v / (k_v (k_v - 1)) (0 when k_v < 2) and raw
// degree, both on the simple graph induced by `nodes`.
RoadMetrics GraphMetrics(const std::vector<std::pair<size_t, size_t>>& edges,
                         const std::vector<size_t>& nodes);

// Road metrics per grid cell; lengths are clipped to each hexagon.
std::vector<RoadMetrics> ComputeRoadMetrics(const HexGrid& grid, const RoadGraph& roads);

// Length of the plane segment a-b inside a convex counter-clockwise polygon.
double ClippedLength(const PlanePoint& a, const PlanePoint& b,
                     const std::array<PlanePoint, 6>& polygon);

// Great-circle km from each cell center to the nearest station of each
// category: metro single-line, metro hub, bus single-line, bus hub.
// Throws InputError "category empty: ..." when a category has no station.
std::vector<std::array<double, 4>> NearestStationDistances(const HexGrid& grid,
                                                           const TransitNetwork& net,
                                                           int jobs = 0);

struct FeatureInputs {
  std::optional<std::vector<RasterCell>> population;
  std::optional<std::vector<Poi>> pois;
  std::optional<RoadGraph> roads;
};

struct FeatureColumn {
  int spec = 0;  // Index into kFeatureSpecs.
  bool available = true;
};

struct FeatureMatrix {
  Target target = Target::kFcr;
  std::vector<FeatureColumn> schema;  // All variables, canonical order.
  std::vector<std::string> names;     // Columns present in `x`.
  std::vector<std::string> cell_ids;
  std::vector<std::pair<int, int>> axial;
  Matrix x;
  std::vector<double> y;
};

// Rows are cells whose target ratio is defined. Variables whose inputs are
// absent are marked unavailable and left out of `x`.
FeatureMatrix BuildFeatures(const HexGrid& grid, const GridStats& stats,
                            const std::vector<TripRecord>& trips,
                            const std::vector<TripClass>& classes,
                            const TransitNetwork& net, const FeatureInputs& inputs,
                            Target target, int jobs = 0);

// cell_id,q,r,<feature columns>,<target>
void WriteFeatureCsv(std::ostream& out, const FeatureMatrix& m);
FeatureMatrix ReadFeatureCsv(std::istream& in);
std::string FeatureSchemaJson(const FeatureMatrix& m);

struct VifStep {
  std::vector<double> vif;  // Per remaining column, before the drop.
  std::optional<size_t> dropped;  // Original column index.
};

struct VifResult {
  std::vector<size_t> retained;  // Original column indices, ascending.
  std::vector<VifStep> steps;
};

// VIF_j = 1 / (1 - R_j^2), regressing column j on the others with an
// intercept; infinite for constant or perfectly explained columns.
std::vector<double> ComputeVif(const Matrix& x);

// Drops the column with the largest VIF while any exceeds `threshold`; among
// tied maxima the highest index goes first. Throws InputError
// "underdetermined VIF" when rows < columns.
VifResult VifFilter(const Matrix& x, double threshold = 10.0);

Matrix SelectColumns(const Matrix& x, const std::vector<size_t>& cols);
std::string VifReportJson(const VifResult& r, const std::vector<std::string>& names);

}  // namespace tncpt

#endif  // TNCPT_FEATURES_H_
