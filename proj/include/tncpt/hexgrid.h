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

// Flat-top hexagonal tessellation over a local equirectangular plane, and
// the per-cell, per-hour and origin-destination aggregations built on it.

#ifndef TNCPT_HEXGRID_H_
#define TNCPT_HEXGRID_H_

#include <array>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tncpt/classify.h"
#include "tncpt/common.h"
#include "tncpt/ingest.h"
#include "tncpt/ptnet.h"

namespace tncpt {

inline constexpr std::string_view kOffGrid = "off-grid";

struct PlanePoint {
  double x = 0.0;  // km east of the anchor
  double y = 0.0;  // km north of the anchor
};

struct HexCell {
  int q = 0;
  int r = 0;
  std::string id;  // "q_r"
  GeoPoint center;
};

class HexGrid {
 public:
  // Throws InputError for a degenerate box and ConfigError for side <= 0.
  HexGrid(const BoundingBox& bbox, double side_km);

  const BoundingBox& bbox() const { return bbox_; }
  double side_km() const { return side_km_; }
  const GeoPoint& anchor() const { return anchor_; }
  const std::vector<HexCell>& cells() const { return cells_; }
  double cell_area_km2() const;

  PlanePoint Project(const GeoPoint& p) const;
  GeoPoint Unproject(const PlanePoint& p) const;

  // Axial coordinates of the hexagon containing a plane point (cube
  // rounding), regardless of the cell set.
  std::pair<int, int> AxialOf(const PlanePoint& p) const;
  PlanePoint CenterOf(int q, int r) const;
  std::optional<size_t> Find(int q, int r) const;

  // Index of the cell containing `p`; nullopt outside the bounding box.
  std::optional<size_t> Locate(const GeoPoint& p) const;
  std::string LocateId(const GeoPoint& p) const;

  // Vertices in plane and geographic coordinates, counter-clockwise.
  std::array<PlanePoint, 6> CornersXY(size_t cell) const;
  std::array<GeoPoint, 6> Corners(size_t cell) const;

 private:
  BoundingBox bbox_;
  double side_km_;
  GeoPoint anchor_;
  double km_per_deg_lon_;
  double km_per_deg_lat_;
  std::vector<HexCell> cells_;
  int q_min_ = 0, r_min_ = 0, q_span_ = 0, r_span_ = 0;
  std::vector<int64_t> index_;  // -1 where (q, r) is not a cell.
};

// Number of distinct pickup days; at least 1.
int CountDays(const std::vector<TripRecord>& trips);

struct CellStats {
  size_t cell = 0;
  // Totals over the study period.
  size_t o = 0, a = 0, fc = 0, lc = 0, ds = 0, as = 0;
  int days = 1;

  double DailyO() const { return static_cast<double>(o) / days; }
  double DailyA() const { return static_cast<double>(a) / days; }
  // Ratios are undefined when their denominator is zero.
  std::optional<double> Fcr() const { return Ratio(fc, o); }
  std::optional<double> Lcr() const { return Ratio(lc, a); }
  std::optional<double> Dsr() const { return Ratio(ds, o); }
  std::optional<double> Asr() const { return Ratio(as, a); }

  static std::optional<double> Ratio(size_t num, size_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

struct GridStats {
  std::vector<CellStats> cells;  // One per grid cell, grid order.
  int days = 1;
  size_t off_grid_origins = 0;
  size_t off_grid_destinations = 0;
};

// Counts are per origin cell (O, FC, DS) and destination cell (A, LC, AS).
GridStats ComputeRatios(const std::vector<TripRecord>& trips,
                        const std::vector<TripClass>& classes, const HexGrid& grid,
                        int days);

void WriteCellsCsv(std::ostream& out, const HexGrid& grid, const GridStats& stats);
void WriteCellsGeoJson(std::ostream& out, const HexGrid& grid, const GridStats& stats);

// Departure-side series (trips, FC, DS) bin by pickup hour; arrival-side
// series (arrivals, LC, AS) bin by drop-off hour.
struct TemporalProfile {
  std::array<size_t, 24> departures{}, fc{}, ds{};
  std::array<size_t, 24> arrivals{}, lc{}, as{};
};
TemporalProfile ComputeTemporalProfile(const std::vector<TripRecord>& trips,
                                       const std::vector<TripClass>& classes);
void WriteTemporalCsv(std::ostream& out, const TemporalProfile& profile);

struct District {
  std::string id;
  // Outer rings of each polygon part; holes are ignored.
  std::vector<std::vector<GeoPoint>> rings;
};
std::vector<District> ParseDistrictsGeoJson(std::istream& in);
bool PointInRing(const GeoPoint& p, const std::vector<GeoPoint>& ring);
inline constexpr std::string_view kNoDistrict = "none";

enum class FlowLevel { kGrid, kDistrict };

struct OdFlow {
  FlowLevel level = FlowLevel::kGrid;
  std::string from;
  std::string to;
  std::string class_filter;
  double flow = 0.0;  // Daily average.
  size_t count = 0;   // Total over the study period.
};

struct ClassFilter {
  std::string name;
  std::vector<TripLabel> labels;
  bool Accepts(TripLabel l) const;
};
// "all", "complementary", or a single label name.
ClassFilter ParseClassFilter(std::string_view name);

// Grid flows first (sorted by from, to), then district flows when
// districts are given. A cell belongs to the district containing its
// center; cells outside every district fall in "none".
std::vector<OdFlow> ComputeOdFlows(const std::vector<TripRecord>& trips,
                                   const std::vector<TripClass>& classes,
                                   const HexGrid& grid,
                                   const std::vector<District>& districts,
                                   const ClassFilter& filter, int days);
void WriteOdFlowsCsv(std::ostream& out, const std::vector<OdFlow>& flows);

struct Histogram {
  double lo = 0.0;
  double width = 1.0;
  std::vector<size_t> counts;
  // Values outside the range are clamped into the end bins.
  void Add(double v);
  size_t Total() const;
};

struct ClassTripStats {
  size_t count = 0;
  Histogram travel_min{0.0, 5.0, std::vector<size_t>(24)};
  Histogram fare_per_km{0.0, 0.25, std::vector<size_t>(40)};
  Histogram wait_min{0.0, 1.0, std::vector<size_t>(30)};
};

struct TripStats {
  bool has_wait = false;
  std::array<ClassTripStats, kNumTripLabels> by_class;
};
TripStats ComputeTripStats(const std::vector<TripRecord>& trips,
                           const std::vector<TripClass>& classes);
// class,metric,bin_lo,bin_hi,count; the wait metric is omitted when the
// input carried no request timestamps.
void WriteTripStatsCsv(std::ostream& out, const TripStats& stats);

enum class LinkKind { kDirect, kIndirectHub, kIndirectSingle };
std::string_view LinkKindName(LinkKind k);

// Complementary trips by matched-station mode and link kind. A first-mile
// trip is direct when its matched station is the nearest station of that
// mode to the trip origin (last-mile: to the destination); otherwise it is
// split by whether the matched station is a hub.
struct ComplementaryBreakdown {
  // [direction: 0 first mile, 1 last mile][mode: 0 metro, 1 bus][kind]
  std::array<std::array<std::array<size_t, 3>, 2>, 2> counts{};
  std::array<size_t, 2> totals{};
};
ComplementaryBreakdown ComputeComplementaryBreakdown(
    const std::vector<TripRecord>& trips, const std::vector<TripClass>& classes,
    const TransitNetwork& net);
void WriteBreakdownCsv(std::ostream& out, const ComplementaryBreakdown& b);

}  // namespace tncpt

#endif  // TNCPT_HEXGRID_H_
