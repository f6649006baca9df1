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

#include "tncpt/hexgrid.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <nlohmann/json.hpp>

#include "tncpt/csv.h"

namespace tncpt {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

std::string OptionalField(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : "";
}

}  // namespace

HexGrid::HexGrid(const BoundingBox& bbox, double side_km)
    : bbox_(bbox), side_km_(side_km) {
  if (!(side_km > 0)) throw ConfigError("hex side must be positive");
  if (bbox.IsDegenerate()) throw InputError("degenerate bounding box");
  anchor_ = bbox.Center();
  km_per_deg_lat_ = kEarthRadiusKm * std::numbers::pi / 180.0;
  km_per_deg_lon_ = km_per_deg_lat_ * std::cos(anchor_.lat * std::numbers::pi / 180.0);

  const PlanePoint lo = Project({bbox.min_lon, bbox.min_lat});
  const PlanePoint hi = Project({bbox.max_lon, bbox.max_lat});
  const double s = side_km_;
  const double eps = 1e-9;
  const int q_lo = static_cast<int>(std::floor(lo.x / (1.5 * s))) - 1;
  const int q_hi = static_cast<int>(std::ceil(hi.x / (1.5 * s))) + 1;

  // Separating-axis overlap of a hexagon with the projected box.
  const double c30 = kSqrt3 / 2.0;
  const double box_axis[2][2] = {
      {c30 * lo.x + 0.5 * lo.y, c30 * hi.x + 0.5 * hi.y},
      {-c30 * hi.x + 0.5 * lo.y, -c30 * lo.x + 0.5 * hi.y}};
  const auto intersects = [&](const PlanePoint& c) {
    const double half_w = s;             // x extent of a flat-top hexagon
    const double half_h = s * c30;       // y extent, also the apothem
    if (c.x + half_w < lo.x - eps || c.x - half_w > hi.x + eps) return false;
    if (c.y + half_h < lo.y - eps || c.y - half_h > hi.y + eps) return false;
    const double p1 = c30 * c.x + 0.5 * c.y;
    const double p2 = -c30 * c.x + 0.5 * c.y;
    if (p1 + half_h < box_axis[0][0] - eps || p1 - half_h > box_axis[0][1] + eps) {
      return false;
    }
    if (p2 + half_h < box_axis[1][0] - eps || p2 - half_h > box_axis[1][1] + eps) {
      return false;
    }
    return true;
  };

  std::vector<std::pair<int, int>> axial;
  for (int q = q_lo; q <= q_hi; ++q) {
    const int r_lo = static_cast<int>(std::floor(lo.y / (kSqrt3 * s) - q / 2.0)) - 1;
    const int r_hi = static_cast<int>(std::ceil(hi.y / (kSqrt3 * s) - q / 2.0)) + 1;
    for (int r = r_lo; r <= r_hi; ++r) {
      if (intersects(CenterOf(q, r))) axial.push_back({q, r});
    }
  }
  std::sort(axial.begin(), axial.end());
  q_min_ = q_lo;
  q_span_ = q_hi - q_lo + 1;
  int r_min = 0, r_max = 0;
  for (size_t i = 0; i < axial.size(); ++i) {
    r_min = i == 0 ? axial[i].second : std::min(r_min, axial[i].second);
    r_max = i == 0 ? axial[i].second : std::max(r_max, axial[i].second);
  }
  r_min_ = r_min;
  r_span_ = r_max - r_min + 1;
  index_.assign(static_cast<size_t>(q_span_) * r_span_, -1);
  for (const auto& [q, r] : axial) {
    index_[static_cast<size_t>(q - q_min_) * r_span_ + (r - r_min_)] =
        static_cast<int64_t>(cells_.size());
    HexCell cell;
    cell.q = q;
    cell.r = r;
    cell.id = std::to_string(q) + "_" + std::to_string(r);
    cell.center = Unproject(CenterOf(q, r));
    cells_.push_back(std::move(cell));
  }
}

double HexGrid::cell_area_km2() const {
  return 1.5 * kSqrt3 * side_km_ * side_km_;
}

PlanePoint HexGrid::Project(const GeoPoint& p) const {
  return {(p.lon - anchor_.lon) * km_per_deg_lon_,
          (p.lat - anchor_.lat) * km_per_deg_lat_};
}

GeoPoint HexGrid::Unproject(const PlanePoint& p) const {
  return {anchor_.lon + p.x / km_per_deg_lon_, anchor_.lat + p.y / km_per_deg_lat_};
}

PlanePoint HexGrid::CenterOf(int q, int r) const {
  return {side_km_ * 1.5 * q, side_km_ * kSqrt3 * (r + q / 2.0)};
}

std::pair<int, int> HexGrid::AxialOf(const PlanePoint& p) const {
  const double fq = (2.0 / 3.0 * p.x) / side_km_;
  const double fr = (-1.0 / 3.0 * p.x + kSqrt3 / 3.0 * p.y) / side_km_;
  const double fs = -fq - fr;
  double q = std::round(fq), r = std::round(fr), s = std::round(fs);
  const double dq = std::abs(q - fq), dr = std::abs(r - fr), ds = std::abs(s - fs);
  if (dq > dr && dq > ds) {
    q = -r - s;
  } else if (dr > ds) {
    r = -q - s;
  }
  return {static_cast<int>(q), static_cast<int>(r)};
}

std::optional<size_t> HexGrid::Find(int q, int r) const {
  if (q < q_min_ || q >= q_min_ + q_span_ || r < r_min_ || r >= r_min_ + r_span_) {
    return std::nullopt;
  }
  const int64_t idx = index_[static_cast<size_t>(q - q_min_) * r_span_ + (r - r_min_)];
  if (idx < 0) return std::nullopt;
  return static_cast<size_t>(idx);
}

std::optional<size_t> HexGrid::Locate(const GeoPoint& p) const {
  if (!bbox_.Contains(p)) return std::nullopt;
  const auto [q, r] = AxialOf(Project(p));
  return Find(q, r);
}

std::string HexGrid::LocateId(const GeoPoint& p) const {
  const auto idx = Locate(p);
  return idx ? cells_[*idx].id : std::string(kOffGrid);
}

std::array<PlanePoint, 6> HexGrid::CornersXY(size_t cell) const {
  const PlanePoint c = CenterOf(cells_[cell].q, cells_[cell].r);
  std::array<PlanePoint, 6> out;
  for (int k = 0; k < 6; ++k) {
    const double a = std::numbers::pi / 3.0 * k;
    out[k] = {c.x + side_km_ * std::cos(a), c.y + side_km_ * std::sin(a)};
  }
  return out;
}

std::array<GeoPoint, 6> HexGrid::Corners(size_t cell) const {
  std::array<GeoPoint, 6> out;
  const auto xy = CornersXY(cell);
  for (int k = 0; k < 6; ++k) out[k] = Unproject(xy[k]);
  return out;
}

int CountDays(const std::vector<TripRecord>& trips) {
  std::set<int64_t> days;
  for (const auto& t : trips) days.insert(DayIndex(t.pickup_time));
  return std::max<int>(1, static_cast<int>(days.size()));
}

GridStats ComputeRatios(const std::vector<TripRecord>& trips,
                        const std::vector<TripClass>& classes, const HexGrid& grid,
                        int days) {
  if (days < 1) throw ConfigError("days must be at least 1");
  if (trips.size() != classes.size()) throw InvariantError("trip and class counts differ");
  GridStats stats;
  stats.days = days;
  stats.cells.resize(grid.cells().size());
  for (size_t i = 0; i < stats.cells.size(); ++i) {
    stats.cells[i].cell = i;
    stats.cells[i].days = days;
  }
  for (size_t i = 0; i < trips.size(); ++i) {
    const TripLabel l = classes[i].label;
    if (const auto o = grid.Locate(trips[i].origin)) {
      auto& c = stats.cells[*o];
      ++c.o;
      if (l == TripLabel::kFirstMile) ++c.fc;
      if (l == TripLabel::kSubstitutive) ++c.ds;
    } else {
      ++stats.off_grid_origins;
    }
    if (const auto d = grid.Locate(trips[i].destination)) {
      auto& c = stats.cells[*d];
      ++c.a;
      if (l == TripLabel::kLastMile) ++c.lc;
      if (l == TripLabel::kSubstitutive) ++c.as;
    } else {
      ++stats.off_grid_destinations;
    }
  }
  return stats;
}

void WriteCellsCsv(std::ostream& out, const HexGrid& grid, const GridStats& stats) {
  csv::WriteRecord(out, {"cell_id", "q", "r", "lon", "lat", "O", "A", "FC", "LC",
                         "DS", "AS", "FCR", "LCR", "DSR", "ASR"});
  const double d = stats.days;
  for (const auto& c : stats.cells) {
    const auto& cell = grid.cells()[c.cell];
    csv::WriteRecord(out, {cell.id, std::to_string(cell.q), std::to_string(cell.r),
                           FormatDouble(cell.center.lon), FormatDouble(cell.center.lat),
                           FormatDouble(c.o / d), FormatDouble(c.a / d),
                           FormatDouble(c.fc / d), FormatDouble(c.lc / d),
                           FormatDouble(c.ds / d), FormatDouble(c.as / d),
                           OptionalField(c.Fcr()), OptionalField(c.Lcr()),
                           OptionalField(c.Dsr()), OptionalField(c.Asr())});
  }
}

void WriteCellsGeoJson(std::ostream& out, const HexGrid& grid, const GridStats& stats) {
  using nlohmann::ordered_json;
  ordered_json features = ordered_json::array();
  const double d = stats.days;
  for (const auto& c : stats.cells) {
    const auto& cell = grid.cells()[c.cell];
    ordered_json ring = ordered_json::array();
    const auto corners = grid.Corners(c.cell);
    for (const auto& p : corners) ring.push_back({p.lon, p.lat});
    ring.push_back({corners[0].lon, corners[0].lat});
    ordered_json props;
    props["cell_id"] = cell.id;
    props["O"] = c.o / d;
    props["A"] = c.a / d;
    props["FC"] = c.fc / d;
    props["LC"] = c.lc / d;
    props["DS"] = c.ds / d;
    props["AS"] = c.as / d;
    const std::pair<const char*, std::optional<double>> ratios[] = {
        {"FCR", c.Fcr()}, {"LCR", c.Lcr()}, {"DSR", c.Dsr()}, {"ASR", c.Asr()}};
    for (const auto& [name, v] : ratios) {
      props[name] = v ? ordered_json(*v) : ordered_json(nullptr);
    }
    ordered_json f;
    f["type"] = "Feature";
    f["geometry"] = {{"type", "Polygon"}, {"coordinates", {ring}}};
    f["properties"] = std::move(props);
    features.push_back(std::move(f));
  }
  ordered_json fc;
  fc["type"] = "FeatureCollection";
  fc["features"] = std::move(features);
  out << fc.dump() << '\n';
}

TemporalProfile ComputeTemporalProfile(const std::vector<TripRecord>& trips,
                                       const std::vector<TripClass>& classes) {
  if (trips.size() != classes.size()) throw InvariantError("trip and class counts differ");
  TemporalProfile p;
  for (size_t i = 0; i < trips.size(); ++i) {
    const int h_dep = HourOfDay(trips[i].pickup_time);
    const int h_arr = HourOfDay(trips[i].dropoff_time);
    const TripLabel l = classes[i].label;
    ++p.departures[h_dep];
    ++p.arrivals[h_arr];
    if (l == TripLabel::kFirstMile) ++p.fc[h_dep];
    if (l == TripLabel::kSubstitutive) {
      ++p.ds[h_dep];
      ++p.as[h_arr];
    }
    if (l == TripLabel::kLastMile) ++p.lc[h_arr];
  }
  return p;
}

void WriteTemporalCsv(std::ostream& out, const TemporalProfile& p) {
  csv::WriteRecord(out, {"hour", "departures", "arrivals", "FC", "LC", "DS", "AS",
                         "FCR", "LCR", "DSR", "ASR"});
  for (int h = 0; h < 24; ++h) {
    csv::WriteRecord(
        out, {std::to_string(h), std::to_string(p.departures[h]),
              std::to_string(p.arrivals[h]), std::to_string(p.fc[h]),
              std::to_string(p.lc[h]), std::to_string(p.ds[h]), std::to_string(p.as[h]),
              OptionalField(CellStats::Ratio(p.fc[h], p.departures[h])),
              OptionalField(CellStats::Ratio(p.lc[h], p.arrivals[h])),
              OptionalField(CellStats::Ratio(p.ds[h], p.departures[h])),
              OptionalField(CellStats::Ratio(p.as[h], p.arrivals[h]))});
  }
}

std::vector<District> ParseDistrictsGeoJson(std::istream& in) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("districts: ") + e.what());
  }
  const auto to_ring = [](const json& coords) {
    std::vector<GeoPoint> ring;
    for (const auto& c : coords) ring.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    return ring;
  };
  std::vector<District> out;
  try {
    for (const auto& f : doc.at("features")) {
      District d;
      const auto& props = f.at("properties");
      if (props.contains("id")) {
        d.id = props["id"].is_string() ? props["id"].get<std::string>()
                                       : props["id"].dump();
      } else {
        d.id = props.at("name").get<std::string>();
      }
      const auto& geom = f.at("geometry");
      const std::string type = geom.at("type").get<std::string>();
      if (type == "Polygon") {
        d.rings.push_back(to_ring(geom.at("coordinates").at(0)));
      } else if (type == "MultiPolygon") {
        for (const auto& poly : geom.at("coordinates")) d.rings.push_back(to_ring(poly.at(0)));
      } else {
        throw InputError("districts: unsupported geometry " + type);
      }
      out.push_back(std::move(d));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("districts: ") + e.what());
  }
  return out;
}

bool PointInRing(const GeoPoint& p, const std::vector<GeoPoint>& ring) {
  bool inside = false;
  const size_t n = ring.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[j];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x = (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

bool ClassFilter::Accepts(TripLabel l) const {
  return std::find(labels.begin(), labels.end(), l) != labels.end();
}

ClassFilter ParseClassFilter(std::string_view name) {
  if (name == "all") {
    return {"all", {TripLabel::kFirstMile, TripLabel::kLastMile,
                    TripLabel::kSubstitutive, TripLabel::kIndependent}};
  }
  if (name == "complementary") {
    return {"complementary", {TripLabel::kFirstMile, TripLabel::kLastMile}};
  }
  try {
    return {std::string(name), {ParseTripLabel(name)}};
  } catch (const InputError&) {
    throw ConfigError("unknown class filter '" + std::string(name) + "'");
  }
}

std::vector<OdFlow> ComputeOdFlows(const std::vector<TripRecord>& trips,
                                   const std::vector<TripClass>& classes,
                                   const HexGrid& grid,
                                   const std::vector<District>& districts,
                                   const ClassFilter& filter, int days) {
  if (days < 1) throw ConfigError("days must be at least 1");
  if (trips.size() != classes.size()) throw InvariantError("trip and class counts differ");
  std::map<std::pair<size_t, size_t>, size_t> grid_counts;
  for (size_t i = 0; i < trips.size(); ++i) {
    if (!filter.Accepts(classes[i].label)) continue;
    const auto o = grid.Locate(trips[i].origin);
    const auto d = grid.Locate(trips[i].destination);
    if (!o || !d) continue;
    ++grid_counts[{*o, *d}];
  }
  std::vector<OdFlow> out;
  std::vector<std::pair<std::pair<std::string, std::string>, size_t>> grid_rows;
  for (const auto& [od, n] : grid_counts) {
    grid_rows.push_back({{grid.cells()[od.first].id, grid.cells()[od.second].id}, n});
  }
  std::sort(grid_rows.begin(), grid_rows.end());
  for (const auto& [od, n] : grid_rows) {
    out.push_back({FlowLevel::kGrid, od.first, od.second, filter.name,
                   static_cast<double>(n) / days, n});
  }
  if (districts.empty()) return out;

  std::vector<std::string> cell_district(grid.cells().size(), std::string(kNoDistrict));
  for (size_t c = 0; c < grid.cells().size(); ++c) {
    for (const auto& d : districts) {
      if (std::any_of(d.rings.begin(), d.rings.end(), [&](const auto& ring) {
            return PointInRing(grid.cells()[c].center, ring);
          })) {
        cell_district[c] = d.id;
        break;
      }
    }
  }
  std::map<std::pair<std::string, std::string>, size_t> district_counts;
  for (const auto& [od, n] : grid_counts) {
    district_counts[{cell_district[od.first], cell_district[od.second]}] += n;
  }
  for (const auto& [od, n] : district_counts) {
    out.push_back({FlowLevel::kDistrict, od.first, od.second, filter.name,
                   static_cast<double>(n) / days, n});
  }
  return out;
}

void WriteOdFlowsCsv(std::ostream& out, const std::vector<OdFlow>& flows) {
  csv::WriteRecord(out, {"level", "from", "to", "class", "flow"});
  for (const auto& f : flows) {
    csv::WriteRecord(out, {f.level == FlowLevel::kGrid ? "grid" : "district", f.from,
                           f.to, f.class_filter, FormatDouble(f.flow)});
  }
}

void Histogram::Add(double v) {
  const double pos = std::floor((v - lo) / width);
  const auto last = static_cast<double>(counts.size() - 1);
  const size_t bin = static_cast<size_t>(std::clamp(pos, 0.0, last));
  ++counts[bin];
}

size_t Histogram::Total() const {
  size_t n = 0;
  for (size_t c : counts) n += c;
  return n;
}

TripStats ComputeTripStats(const std::vector<TripRecord>& trips,
                           const std::vector<TripClass>& classes) {
  if (trips.size() != classes.size()) throw InvariantError("trip and class counts differ");
  TripStats s;
  s.has_wait = AnyRequestTime(trips);
  for (size_t i = 0; i < trips.size(); ++i) {
    auto& c = s.by_class[static_cast<int>(classes[i].label)];
    ++c.count;
    c.travel_min.Add(trips[i].DurationMin());
    c.fare_per_km.Add(trips[i].cost / trips[i].distance_km);
    if (const auto w = trips[i].WaitMin()) c.wait_min.Add(*w);
  }
  return s;
}

void WriteTripStatsCsv(std::ostream& out, const TripStats& s) {
  csv::WriteRecord(out, {"class", "metric", "bin_lo", "bin_hi", "count"});
  for (int k = 0; k < kNumTripLabels; ++k) {
    const auto& c = s.by_class[k];
    std::vector<std::pair<std::string, const Histogram*>> metrics = {
        {"travel_time_min", &c.travel_min}, {"fare_per_km", &c.fare_per_km}};
    if (s.has_wait) metrics.push_back({"wait_time_min", &c.wait_min});
    for (const auto& [name, h] : metrics) {
      for (size_t b = 0; b < h->counts.size(); ++b) {
        csv::WriteRecord(out, {std::string(TripLabelName(static_cast<TripLabel>(k))), name,
                               FormatDouble(h->lo + h->width * b),
                               FormatDouble(h->lo + h->width * (b + 1)),
                               std::to_string(h->counts[b])});
      }
    }
  }
}

std::string_view LinkKindName(LinkKind k) {
  switch (k) {
    case LinkKind::kDirect:
      return "direct";
    case LinkKind::kIndirectHub:
      return "indirect_hub";
    case LinkKind::kIndirectSingle:
      return "indirect_single";
  }
  return "";
}

ComplementaryBreakdown ComputeComplementaryBreakdown(
    const std::vector<TripRecord>& trips, const std::vector<TripClass>& classes,
    const TransitNetwork& net) {
  if (trips.size() != classes.size()) throw InvariantError("trip and class counts differ");
  ComplementaryBreakdown b;
  const auto& stations = net.stations();
  for (size_t i = 0; i < trips.size(); ++i) {
    const auto& c = classes[i];
    if (c.label != TripLabel::kFirstMile && c.label != TripLabel::kLastMile) continue;
    if (!c.matched_station) continue;
    const auto idx = net.StationIndex(*c.matched_station);
    if (!idx) continue;
    const Station& matched = stations[*idx];
    const int dir = c.label == TripLabel::kFirstMile ? 0 : 1;
    const GeoPoint& anchor = dir == 0 ? trips[i].origin : trips[i].destination;
    size_t nearest = *idx;
    double best = std::numeric_limits<double>::infinity();
    for (size_t s = 0; s < stations.size(); ++s) {
      if (stations[s].mode != matched.mode) continue;
      const double km = HaversineKm(anchor, stations[s].location);
      if (km < best) {
        best = km;
        nearest = s;
      }
    }
    LinkKind kind = LinkKind::kDirect;
    if (nearest != *idx) {
      kind = matched.is_hub() ? LinkKind::kIndirectHub : LinkKind::kIndirectSingle;
    }
    const int mode = matched.mode == Mode::kMetro ? 0 : 1;
    ++b.counts[dir][mode][static_cast<int>(kind)];
    ++b.totals[dir];
  }
  return b;
}

void WriteBreakdownCsv(std::ostream& out, const ComplementaryBreakdown& b) {
  csv::WriteRecord(out, {"direction", "mode", "kind", "count", "share"});
  for (int dir = 0; dir < 2; ++dir) {
    for (int mode = 0; mode < 2; ++mode) {
      for (int k = 0; k < 3; ++k) {
        const size_t n = b.counts[dir][mode][k];
        const double share =
            b.totals[dir] == 0 ? 0.0 : static_cast<double>(n) / b.totals[dir];
        csv::WriteRecord(out, {dir == 0 ? "first_mile" : "last_mile",
                               mode == 0 ? "metro" : "bus",
                               std::string(LinkKindName(static_cast<LinkKind>(k))),
                               std::to_string(n), FormatDouble(share)});
      }
    }
  }
}

}  // namespace tncpt
