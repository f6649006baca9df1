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

#include "tncpt/features.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <nlohmann/json.hpp>
#include <set>

#include "tncpt/csv.h"

namespace tncpt {

const std::array<FeatureSpec, kNumFeatures> kFeatureSpecs = {{
    {"log_pop_density", "log(persons/km2 + 1)", "Population density"},
    {"dist_metro_station", "km", "Distance to nearest single-line metro station"},
    {"dist_metro_hub", "km", "Distance to nearest multi-line metro hub"},
    {"dist_bus_stop", "km", "Distance to nearest single-line bus stop"},
    {"dist_bus_hub", "km", "Distance to nearest multi-line bus hub"},
    {"bus_stop_density", "number/km2", "Bus stop density"},
    {"bus_hub_density", "number/km2", "Bus hub density"},
    {"avg_clustering", "-", "Average clustering"},
    {"avg_centrality", "-", "Average centrality"},
    {"road_density", "km/km2", "Road network density"},
    {"highway_density", "km/km2", "Highway density"},
    {"n_trips", "number/day", "No. Trips"},
    {"avg_wait_time", "min", "Average waiting time"},
    {"avg_travel_time", "min", "Average travel time"},
    {"avg_fare_per_km", "RMB/km", "Average fare per km"},
    {"residence_density", "number/km2", "Residence density"},
    {"retail_density", "number/km2", "Retail density"},
    {"catering_density", "number/km2", "Catering density"},
    {"enterprise_density", "number/km2", "Enterprise density"},
}};

namespace {

enum FeatureIndex {
  kPop = 0,
  kDistMetro,
  kDistMetroHub,
  kDistBus,
  kDistBusHub,
  kBusStopDensity,
  kBusHubDensity,
  kClustering,
  kCentrality,
  kRoadDensity,
  kHighwayDensity,
  kTrips,
  kWait,
  kTravel,
  kFarePerKm,
  kResidence,
  kRetail,
  kCatering,
  kEnterprise,
};

constexpr std::string_view kTargetNames[] = {"FCR", "LCR", "DSR", "ASR"};

std::string PointKey(const GeoPoint& p) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.7f,%.7f", p.lon, p.lat);
  return buf;
}

}  // namespace

std::string_view TargetName(Target t) { return kTargetNames[static_cast<int>(t)]; }

Target ParseTarget(std::string_view s) {
  for (int i = 0; i < 4; ++i) {
    if (kTargetNames[i] == s) return static_cast<Target>(i);
  }
  throw ConfigError("unknown target '" + std::string(s) + "' (expected FCR, LCR, DSR or ASR)");
}

std::vector<RasterCell> ReadPopulationCsv(std::istream& in) {
  csv::Reader reader(in);
  if (!reader.has_header()) throw InputError("population file is empty");
  const size_t lon = reader.RequireColumn("lon");
  const size_t lat = reader.RequireColumn("lat");
  const size_t pop = reader.RequireColumn("pop");
  std::vector<RasterCell> out;
  std::vector<std::string> f;
  size_t line = 0;
  bool malformed = false;
  while (reader.Next(f, line, malformed)) {
    if (malformed || f.size() != reader.header().size()) {
      throw InputError("population line " + std::to_string(line) + ": malformed record");
    }
    out.push_back({{ParseDouble(f[lon], "lon"), ParseDouble(f[lat], "lat")},
                   ParseDouble(f[pop], "pop")});
  }
  return out;
}

std::vector<Poi> ReadPoisCsv(std::istream& in) {
  csv::Reader reader(in);
  if (!reader.has_header()) throw InputError("POI file is empty");
  const size_t lon = reader.RequireColumn("lon");
  const size_t lat = reader.RequireColumn("lat");
  const size_t cat = reader.RequireColumn("category");
  std::vector<Poi> out;
  std::vector<std::string> f;
  size_t line = 0;
  bool malformed = false;
  while (reader.Next(f, line, malformed)) {
    if (malformed || f.size() != reader.header().size()) {
      throw InputError("POI line " + std::to_string(line) + ": malformed record");
    }
    out.push_back({{ParseDouble(f[lon], "lon"), ParseDouble(f[lat], "lat")}, f[cat]});
  }
  return out;
}

RoadGraph ReadRoadsGeoJson(std::istream& in) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("roads: ") + e.what());
  }
  RoadGraph g;
  std::map<std::string, size_t> node_of;
  const auto node = [&](const GeoPoint& p) {
    auto [it, inserted] = node_of.emplace(PointKey(p), g.nodes.size());
    if (inserted) g.nodes.push_back(p);
    return it->second;
  };
  const auto add_line = [&](const json& coords, bool highway) {
    RoadEdge e;
    e.highway = highway;
    for (const auto& c : coords) {
      e.shape.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    }
    if (e.shape.size() < 2) throw InputError("roads: line string with fewer than 2 points");
    for (size_t i = 0; i + 1 < e.shape.size(); ++i) {
      e.length_km += HaversineKm(e.shape[i], e.shape[i + 1]);
    }
    if (!(e.length_km > 0)) return;
    e.u = node(e.shape.front());
    e.v = node(e.shape.back());
    g.edges.push_back(std::move(e));
  };
  try {
    for (const auto& f : doc.at("features")) {
      bool highway = false;
      if (f.contains("properties") && f["properties"].is_object() &&
          f["properties"].contains("highway")) {
        const auto& h = f["properties"]["highway"];
        highway = h.is_boolean() ? h.get<bool>() : (h.is_number() && h.get<double>() != 0);
      }
      const auto& geom = f.at("geometry");
      const std::string type = geom.at("type").get<std::string>();
      if (type == "LineString") {
        add_line(geom.at("coordinates"), highway);
      } else if (type == "MultiLineString") {
        for (const auto& part : geom.at("coordinates")) add_line(part, highway);
      } else {
        throw InputError("roads: unsupported geometry " + type);
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("roads: ") + e.what());
  }
  return g;
}

RoadMetrics GraphMetrics(const std::vector<std::pair<size_t, size_t>>& edges,
                         const std::vector<size_t>& nodes) {
  RoadMetrics m;
  if (nodes.empty()) return m;
  const std::set<size_t> members(nodes.begin(), nodes.end());
  std::map<size_t, std::set<size_t>> adj;
  for (size_t n : members) adj[n];
  for (const auto& [u, v] : edges) {
    if (u == v || !members.count(u) || !members.count(v)) continue;
    adj[u].insert(v);
    adj[v].insert(u);
  }
  double sum_c = 0.0, sum_k = 0.0;
  for (const auto& [v, nb] : adj) {
    const size_t k = nb.size();
    sum_k += static_cast<double>(k);
    if (k < 2) continue;
    size_t e = 0;
    for (auto a = nb.begin(); a != nb.end(); ++a) {
      for (auto b = std::next(a); b != nb.end(); ++b) {
        if (adj[*a].count(*b)) ++e;
      }
    }
    sum_c += 2.0 * static_cast<double>(e) / (static_cast<double>(k) * (k - 1));
  }
  m.avg_clustering = sum_c / static_cast<double>(adj.size());
  m.avg_centrality = sum_k / static_cast<double>(adj.size());
  return m;
}

double ClippedLength(const PlanePoint& a, const PlanePoint& b,
                     const std::array<PlanePoint, 6>& polygon) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  double t_in = 0.0, t_out = 1.0;
  for (size_t i = 0; i < polygon.size(); ++i) {
    const PlanePoint& p = polygon[i];
    const PlanePoint& q = polygon[(i + 1) % polygon.size()];
    const double nx = -(q.y - p.y), ny = q.x - p.x;  // inward for CCW
    const double num = nx * (a.x - p.x) + ny * (a.y - p.y);
    const double den = nx * dx + ny * dy;
    if (den == 0.0) {
      if (num < 0.0) return 0.0;
      continue;
    }
    const double t = -num / den;
    if (den > 0.0) {
      t_in = std::max(t_in, t);
    } else {
      t_out = std::min(t_out, t);
    }
    if (t_in >= t_out) return 0.0;
  }
  return (t_out - t_in) * std::hypot(dx, dy);
}

std::vector<RoadMetrics> ComputeRoadMetrics(const HexGrid& grid, const RoadGraph& roads) {
  const size_t n_cells = grid.cells().size();
  std::vector<RoadMetrics> out(n_cells);
  std::vector<std::vector<size_t>> cell_nodes(n_cells);
  for (size_t i = 0; i < roads.nodes.size(); ++i) {
    if (const auto c = grid.Locate(roads.nodes[i])) cell_nodes[*c].push_back(i);
  }
  std::vector<std::pair<size_t, size_t>> pairs;
  for (const auto& e : roads.edges) pairs.push_back({e.u, e.v});
  for (size_t c = 0; c < n_cells; ++c) {
    const RoadMetrics g = GraphMetrics(pairs, cell_nodes[c]);
    out[c].avg_clustering = g.avg_clustering;
    out[c].avg_centrality = g.avg_centrality;
  }

  const double s = grid.side_km();
  constexpr double kSqrt3 = 1.7320508075688772;
  std::vector<std::array<PlanePoint, 6>> corners(n_cells);
  for (size_t c = 0; c < n_cells; ++c) corners[c] = grid.CornersXY(c);
  for (const auto& e : roads.edges) {
    for (size_t i = 0; i + 1 < e.shape.size(); ++i) {
      const PlanePoint a = grid.Project(e.shape[i]);
      const PlanePoint b = grid.Project(e.shape[i + 1]);
      const double x0 = std::min(a.x, b.x), x1 = std::max(a.x, b.x);
      const double y0 = std::min(a.y, b.y), y1 = std::max(a.y, b.y);
      const int q_lo = static_cast<int>(std::floor(x0 / (1.5 * s))) - 1;
      const int q_hi = static_cast<int>(std::ceil(x1 / (1.5 * s))) + 1;
      for (int q = q_lo; q <= q_hi; ++q) {
        const int r_lo = static_cast<int>(std::floor(y0 / (kSqrt3 * s) - q / 2.0)) - 1;
        const int r_hi = static_cast<int>(std::ceil(y1 / (kSqrt3 * s) - q / 2.0)) + 1;
        for (int r = r_lo; r <= r_hi; ++r) {
          const auto cell = grid.Find(q, r);
          if (!cell) continue;
          const double len = ClippedLength(a, b, corners[*cell]);
          if (len <= 0.0) continue;
          out[*cell].road_km += len;
          if (e.highway) out[*cell].highway_km += len;
        }
      }
    }
  }
  return out;
}

std::vector<std::array<double, 4>> NearestStationDistances(const HexGrid& grid,
                                                           const TransitNetwork& net,
                                                           int jobs) {
  static constexpr std::string_view kCategoryNames[] = {
      "single-line metro station", "multi-line metro hub", "single-line bus stop",
      "multi-line bus hub"};
  std::array<std::vector<GeoPoint>, 4> points;
  for (const auto& st : net.stations()) {
    const int cat = (st.mode == Mode::kMetro ? 0 : 2) + (st.is_hub() ? 1 : 0);
    points[cat].push_back(st.location);
  }
  for (int k = 0; k < 4; ++k) {
    if (points[k].empty()) {
      throw InputError("category empty: " + std::string(kCategoryNames[k]));
    }
    std::sort(points[k].begin(), points[k].end(),
              [](const GeoPoint& a, const GeoPoint& b) {
                return a.lat != b.lat ? a.lat < b.lat : a.lon < b.lon;
              });
  }
  const double km_per_rad = kEarthRadiusKm;
  const double rad = std::numbers::pi / 180.0;
  std::vector<std::array<double, 4>> out(grid.cells().size());
  ParallelFor(grid.cells().size(), jobs, [&](size_t c) {
    const GeoPoint& p = grid.cells()[c].center;
    for (int k = 0; k < 4; ++k) {
      const auto& pts = points[k];
      const size_t start = static_cast<size_t>(
          std::lower_bound(pts.begin(), pts.end(), p.lat,
                           [](const GeoPoint& a, double lat) { return a.lat < lat; }) -
          pts.begin());
      double best = std::numeric_limits<double>::infinity();
      const auto bound = [&](const GeoPoint& q) {
        return km_per_rad * std::abs(q.lat - p.lat) * rad;
      };
      const auto visit = [&](size_t i) {
        if (bound(pts[i]) > best * (1.0 + 1e-9) + 1e-12) return false;
        best = std::min(best, HaversineKm(p, pts[i]));
        return true;
      };
      for (size_t i = start; i < pts.size(); ++i) {
        if (!visit(i)) break;
      }
      for (size_t i = start; i-- > 0;) {
        if (!visit(i)) break;
      }
      out[c][k] = best;
    }
  });
  return out;
}

FeatureMatrix BuildFeatures(const HexGrid& grid, const GridStats& stats,
                            const std::vector<TripRecord>& trips,
                            const std::vector<TripClass>& classes,
                            const TransitNetwork& net, const FeatureInputs& inputs,
                            Target target, int jobs) {
  if (trips.size() != classes.size()) throw InvariantError("trip and class counts differ");
  if (stats.cells.size() != grid.cells().size()) {
    throw InvariantError("grid statistics do not match the grid");
  }
  const size_t n_cells = grid.cells().size();
  const double area = grid.cell_area_km2();
  const bool departure = IsDepartureTarget(target);

  std::array<bool, kNumFeatures> available;
  available.fill(true);
  available[kPop] = inputs.population.has_value();
  for (int k : {kClustering, kCentrality, kRoadDensity, kHighwayDensity}) {
    available[k] = inputs.roads.has_value();
  }
  available[kWait] = AnyRequestTime(trips);
  for (int k : {kResidence, kRetail, kCatering, kEnterprise}) {
    available[k] = inputs.pois.has_value();
  }

  std::vector<std::array<double, kNumFeatures>> cols(n_cells);
  for (auto& row : cols) row.fill(0.0);

  const auto dist = NearestStationDistances(grid, net, jobs);
  for (size_t c = 0; c < n_cells; ++c) {
    for (int k = 0; k < 4; ++k) cols[c][kDistMetro + k] = dist[c][k];
  }
  for (const auto& st : net.stations()) {
    if (st.mode != Mode::kBus) continue;
    if (const auto c = grid.Locate(st.location)) {
      cols[*c][st.is_hub() ? kBusHubDensity : kBusStopDensity] += 1.0 / area;
    }
  }
  if (inputs.population) {
    std::vector<double> mass(n_cells, 0.0);
    for (const auto& rc : *inputs.population) {
      if (const auto c = grid.Locate(rc.location)) mass[*c] += rc.pop;
    }
    for (size_t c = 0; c < n_cells; ++c) cols[c][kPop] = std::log(mass[c] / area + 1.0);
  }
  if (inputs.roads) {
    const auto roads = ComputeRoadMetrics(grid, *inputs.roads);
    for (size_t c = 0; c < n_cells; ++c) {
      cols[c][kClustering] = roads[c].avg_clustering;
      cols[c][kCentrality] = roads[c].avg_centrality;
      cols[c][kRoadDensity] = roads[c].road_km / area;
      cols[c][kHighwayDensity] = roads[c].highway_km / area;
    }
  }
  if (inputs.pois) {
    for (const auto& poi : *inputs.pois) {
      const auto it = std::find(std::begin(kPoiCategories), std::end(kPoiCategories),
                                poi.category);
      if (it == std::end(kPoiCategories)) continue;
      if (const auto c = grid.Locate(poi.location)) {
        cols[*c][kResidence + (it - std::begin(kPoiCategories))] += 1.0 / area;
      }
    }
  }

  std::vector<size_t> n(n_cells, 0), n_wait(n_cells, 0);
  std::vector<double> wait(n_cells, 0.0), travel(n_cells, 0.0), fare(n_cells, 0.0);
  for (const auto& t : trips) {
    const auto c = grid.Locate(departure ? t.origin : t.destination);
    if (!c) continue;
    ++n[*c];
    travel[*c] += t.DurationMin();
    fare[*c] += t.cost / t.distance_km;
    if (const auto w = t.WaitMin()) {
      wait[*c] += *w;
      ++n_wait[*c];
    }
  }
  for (size_t c = 0; c < n_cells; ++c) {
    if (n[c] == 0) continue;
    cols[c][kTrips] = static_cast<double>(n[c]) / stats.days;
    cols[c][kTravel] = travel[c] / static_cast<double>(n[c]);
    cols[c][kFarePerKm] = fare[c] / static_cast<double>(n[c]);
    cols[c][kWait] = n_wait[c] == 0 ? 0.0 : wait[c] / static_cast<double>(n_wait[c]);
  }

  FeatureMatrix m;
  m.target = target;
  std::vector<int> present;
  for (int k = 0; k < kNumFeatures; ++k) {
    m.schema.push_back({k, available[k]});
    if (available[k]) {
      present.push_back(k);
      m.names.emplace_back(kFeatureSpecs[k].name);
    }
  }
  std::vector<double> flat;
  for (size_t c = 0; c < n_cells; ++c) {
    const auto& s = stats.cells[c];
    std::optional<double> y;
    switch (target) {
      case Target::kFcr: y = s.Fcr(); break;
      case Target::kLcr: y = s.Lcr(); break;
      case Target::kDsr: y = s.Dsr(); break;
      case Target::kAsr: y = s.Asr(); break;
    }
    if (!y) continue;
    m.cell_ids.push_back(grid.cells()[c].id);
    m.axial.push_back({grid.cells()[c].q, grid.cells()[c].r});
    m.y.push_back(*y);
    for (int k : present) flat.push_back(cols[c][k]);
  }
  m.x.rows = m.y.size();
  m.x.cols = present.size();
  m.x.data = std::move(flat);
  return m;
}

void WriteFeatureCsv(std::ostream& out, const FeatureMatrix& m) {
  std::vector<std::string> header = {"cell_id", "q", "r"};
  header.insert(header.end(), m.names.begin(), m.names.end());
  header.emplace_back(TargetName(m.target));
  csv::WriteRecord(out, header);
  for (size_t i = 0; i < m.x.rows; ++i) {
    std::vector<std::string> row = {m.cell_ids[i], std::to_string(m.axial[i].first),
                                    std::to_string(m.axial[i].second)};
    for (size_t j = 0; j < m.x.cols; ++j) row.push_back(FormatDouble(m.x(i, j)));
    row.push_back(FormatDouble(m.y[i]));
    csv::WriteRecord(out, row);
  }
}

FeatureMatrix ReadFeatureCsv(std::istream& in) {
  csv::Reader reader(in);
  if (!reader.has_header()) throw InputError("feature file is empty");
  const auto& header = reader.header();
  if (header.size() < 5 || header[0] != "cell_id" || header[1] != "q" || header[2] != "r") {
    throw InputError("feature file: expected header cell_id,q,r,<features>,<target>");
  }
  FeatureMatrix m;
  m.target = ParseTarget(header.back());
  m.names.assign(header.begin() + 3, header.end() - 1);
  for (int k = 0; k < kNumFeatures; ++k) {
    const bool present = std::find(m.names.begin(), m.names.end(),
                                   kFeatureSpecs[k].name) != m.names.end();
    m.schema.push_back({k, present});
  }
  m.x.cols = m.names.size();
  std::vector<std::string> f;
  size_t line = 0;
  bool malformed = false;
  while (reader.Next(f, line, malformed)) {
    if (malformed || f.size() != header.size()) {
      throw InputError("feature file line " + std::to_string(line) + ": malformed record");
    }
    m.cell_ids.push_back(f[0]);
    m.axial.push_back({static_cast<int>(ParseInt(f[1], "q")),
                       static_cast<int>(ParseInt(f[2], "r"))});
    for (size_t j = 0; j < m.x.cols; ++j) {
      m.x.data.push_back(ParseDouble(f[3 + j], m.names[j]));
    }
    m.y.push_back(ParseDouble(f.back(), "target"));
  }
  m.x.rows = m.y.size();
  return m;
}

std::string FeatureSchemaJson(const FeatureMatrix& m) {
  nlohmann::ordered_json cols = nlohmann::ordered_json::array();
  for (const auto& c : m.schema) {
    const auto& s = kFeatureSpecs[c.spec];
    nlohmann::ordered_json j;
    j["name"] = s.name;
    j["unit"] = s.unit;
    j["definition"] = s.definition;
    j["available"] = c.available;
    cols.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["target"] = TargetName(m.target);
  doc["rows"] = m.x.rows;
  doc["columns"] = std::move(cols);
  return doc.dump(2);
}

std::vector<double> ComputeVif(const Matrix& x) {
  const size_t n = x.rows, p = x.cols;
  Eigen::MatrixXd full(n, p);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < p; ++j) full(i, j) = x(i, j);
  }
  std::vector<double> vif(p);
  for (size_t j = 0; j < p; ++j) {
    Eigen::MatrixXd a(n, p);
    a.col(0).setOnes();
    for (size_t k = 0, c = 1; k < p; ++k) {
      if (k != j) a.col(c++) = full.col(k);
    }
    const Eigen::VectorXd b = full.col(j);
    const double mean = b.mean();
    const double sst = (b.array() - mean).square().sum();
    if (!(sst > 0.0)) {
      vif[j] = std::numeric_limits<double>::infinity();
      continue;
    }
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
    const double ssr = (b - a * coef).squaredNorm();
    vif[j] = ssr <= 1e-12 * sst ? std::numeric_limits<double>::infinity() : sst / ssr;
  }
  return vif;
}

VifResult VifFilter(const Matrix& x, double threshold) {
  if (x.rows < x.cols) throw InputError("underdetermined VIF");
  VifResult result;
  std::vector<size_t> keep(x.cols);
  for (size_t j = 0; j < x.cols; ++j) keep[j] = j;
  while (!keep.empty()) {
    VifStep step;
    step.vif = ComputeVif(SelectColumns(x, keep));
    size_t worst = 0;
    for (size_t j = 1; j < keep.size(); ++j) {
      if (step.vif[j] >= step.vif[worst]) worst = j;
    }
    if (!(step.vif[worst] > threshold)) {
      result.steps.push_back(std::move(step));
      break;
    }
    step.dropped = keep[worst];
    result.steps.push_back(std::move(step));
    keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(worst));
  }
  result.retained = keep;
  return result;
}

Matrix SelectColumns(const Matrix& x, const std::vector<size_t>& cols) {
  Matrix out(x.rows, cols.size());
  for (size_t i = 0; i < x.rows; ++i) {
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = x(i, cols[j]);
  }
  return out;
}

std::string VifReportJson(const VifResult& r, const std::vector<std::string>& names) {
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  std::vector<size_t> keep(names.size());
  for (size_t j = 0; j < keep.size(); ++j) keep[j] = j;
  for (const auto& s : r.steps) {
    nlohmann::ordered_json vif;
    for (size_t j = 0; j < s.vif.size() && j < keep.size(); ++j) {
      vif[names[keep[j]]] = std::isfinite(s.vif[j]) ? nlohmann::ordered_json(s.vif[j])
                                                    : nlohmann::ordered_json("inf");
    }
    nlohmann::ordered_json j;
    j["vif"] = std::move(vif);
    j["dropped"] = s.dropped ? nlohmann::ordered_json(names[*s.dropped])
                             : nlohmann::ordered_json(nullptr);
    steps.push_back(std::move(j));
    if (s.dropped) keep.erase(std::find(keep.begin(), keep.end(), *s.dropped));
  }
  nlohmann::ordered_json retained = nlohmann::ordered_json::array();
  for (size_t j : r.retained) retained.push_back(names[j]);
  nlohmann::ordered_json doc;
  doc["retained"] = std::move(retained);
  doc["steps"] = std::move(steps);
  return doc.dump(2);
}

}  // namespace tncpt
