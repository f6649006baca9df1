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

#include "tncpt/synth.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>

#include <nlohmann/json.hpp>

#include "tncpt/csv.h"

namespace tncpt {

namespace {

using nlohmann::ordered_json;

constexpr std::string_view kPlaces[] = {
    "Anting",     "Baoshan",    "Caohejing",  "Dahua",      "Fengxian",
    "Gubei",      "Hongkou",    "Jiangwan",   "Jinqiao",    "Kangqiao",
    "Longhua",    "Meilan",     "Nanxiang",   "Pengpu",     "Qibao",
    "Sanlin",     "Shibo",      "Tangzhen",   "Wujiaochang", "Xinzhuang",
    "Yangpu",     "Zhangjiang", "Zhenru",     "Beicai",     "Chuansha",
    "Dongchang",  "Fenglin",    "Gaoqiao",    "Huamu",      "Jiading",
    "Jinshan",    "Laoximen",   "Lujiazui",   "Minhang",    "Nanpu",
    "Puxing",     "Qingpu",     "Shuyuan",    "Tianlin",    "Waigaoqiao",
    "Xujing",     "Yuyuan",     "Zhoupu",     "Songjiang",  "Huating",
    "Liuhang",    "Malu",       "Nicheng",    "Shenzhuang", "Taopu",
    "Wusong",     "Xinhua",     "Yinhang",    "Zhuqiao",    "Chedun",
    "Dianshan",   "Fahua",      "Guanlan",    "Hengsha",    "Jiuting",
    "Langxia",    "Maqiao",     "Nanqiao",    "Pujiang",    "Sijing",
    "Tinglin",    "Weiqing",    "Xiangyang",  "Yanghang",   "Zhaoxiang",
    "Chenjia",    "Datuan",     "Fuxing",     "Gangxi",     "Huinan",
    "Jinze",      "Luodian",    "Miaohang",   "Panqiao",    "Shanyang"};

constexpr std::string_view kRoads[] = {
    "Wankang",  "Lianhua",  "Siping",   "Tianmu",   "Wuning",   "Changshou",
    "Jiangning", "Xietu",   "Zhaojiabang", "Huashan", "Yan'an",  "Guangyuan",
    "Hongmei",  "Kaixuan",  "Dalian",   "Songhu",   "Guoshun",  "Handan",
    "Quyang",   "Linping",  "Miyun",    "Ningguo",  "Pingliang", "Xuchang",
    "Jungong",  "Yinhang",  "Wenshui",  "Gonghe",   "Anyuan",   "Kangding"};

// Local plane (km) around the scenario center.
struct Plane {
  GeoPoint center;
  double kx = 0.0;
  double ky = 0.0;

  explicit Plane(const GeoPoint& c) : center(c) {
    ky = kEarthRadiusKm * std::numbers::pi / 180.0;
    kx = ky * std::cos(c.lat * std::numbers::pi / 180.0);
  }
  GeoPoint ToGeo(double x, double y) const {
    return {RoundTo(center.lon + x / kx, 5), RoundTo(center.lat + y / ky, 5)};
  }
  GeoPoint ToGeoRaw(double x, double y) const {
    return {center.lon + x / kx, center.lat + y / ky};
  }
};

struct Xy {
  double x = 0.0;
  double y = 0.0;
};

double DistKm(const Xy& a, const Xy& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string PlantedName(PlantedKind k) {
  static constexpr std::string_view kNames[] = {
      "first-mile", "last-mile", "substitutive", "C1",
      "C3",         "C4",        "C5",           "C6"};
  return std::string(kNames[static_cast<int>(k)]);
}

GroundTruth TruthOf(PlantedKind k) {
  switch (k) {
    case PlantedKind::kFirstMile:
      return {TripLabel::kFirstMile, std::nullopt};
    case PlantedKind::kLastMile:
      return {TripLabel::kLastMile, std::nullopt};
    case PlantedKind::kSubstitutive:
      return {TripLabel::kSubstitutive, std::nullopt};
    case PlantedKind::kViolateC1:
      return {TripLabel::kIndependent, Condition::kC1};
    case PlantedKind::kViolateC3:
      return {TripLabel::kIndependent, Condition::kC3};
    case PlantedKind::kViolateC4:
      return {TripLabel::kIndependent, Condition::kC4};
    case PlantedKind::kViolateC5:
      return {TripLabel::kIndependent, Condition::kC5};
    case PlantedKind::kViolateC6:
      return {TripLabel::kIndependent, Condition::kC6};
  }
  return {};
}

struct Network {
  std::vector<Station> stations;
  std::vector<Xy> xy;
  std::vector<Route> routes;
  std::vector<size_t> chain_first;  // Stops near the start of the chain.
  std::vector<size_t> chain_last;
};

Network BuildNetwork(const ScenarioSpec& spec, const Plane& plane) {
  Network net;
  std::map<std::pair<long, long>, size_t> at;
  size_t next_place = 0;
  auto station_at = [&](double x, double y, Mode mode,
                        std::optional<std::string> name = std::nullopt) {
    const std::pair<long, long> key{std::lround(x * 1000), std::lround(y * 1000)};
    if (auto it = at.find(key); it != at.end()) return it->second;
    Station s;
    const size_t i = net.stations.size();
    s.id = (mode == Mode::kMetro ? "M" : "B") + std::to_string(i + 1);
    if (name) {
      s.name = *name;
    } else {
      if (next_place >= std::size(kPlaces)) throw ConfigError("synth: too many stations");
      s.name = std::string(kPlaces[next_place++]);
    }
    if (mode == Mode::kMetro) {
      s.aliases = {s.name + " Station", s.name + " Metro Station"};
    } else {
      s.aliases = {s.name + " Bus Station"};
    }
    s.location = plane.ToGeo(x, y);
    s.mode = mode;
    net.stations.push_back(std::move(s));
    net.xy.push_back({x, y});
    at[key] = i;
    return i;
  };
  auto add_route = [&](const std::string& id, Mode mode,
                       const std::vector<size_t>& stops) {
    Route r;
    r.id = id;
    r.line_id = id;
    r.mode = mode;
    for (size_t s : stops) {
      r.station_ids.push_back(net.stations[s].id);
      auto& lines = net.stations[s].line_ids;
      if (std::find(lines.begin(), lines.end(), id) == lines.end()) lines.push_back(id);
    }
    if (mode == Mode::kMetro) {
      r.headway_min = spec.metro_headway_min;
      r.service_start = 5 * 60 + 30;
      r.service_end = 23 * 60 + 30;
      r.speed_kmh = spec.metro_speed_kmh;
    } else {
      r.headway_min = spec.bus_headway_min;
      r.service_start = 6 * 60;
      r.service_end = 23 * 60;
      r.speed_kmh = spec.bus_speed_kmh;
    }
    net.routes.push_back(std::move(r));
  };

  if (spec.metro_lines < 0 || spec.metro_lines > 4) {
    throw ConfigError("synth: metro_lines must be in [0, 4]");
  }
  // East-west lines at y = -4, 4; north-south lines at x = -4, 4.
  const double lines[4][2] = {{0, -4}, {1, 4}, {0, 4}, {1, -4}};
  for (int l = 0; l < spec.metro_lines; ++l) {
    const bool vertical = lines[l][0] != 0;
    std::vector<size_t> stops;
    for (int k = -4; k <= 4; ++k) {
      const double u = 2.0 * k;
      stops.push_back(vertical ? station_at(lines[l][1], u, Mode::kMetro)
                               : station_at(u, lines[l][1], Mode::kMetro));
    }
    add_route("M" + std::to_string(l + 1), Mode::kMetro, stops);
  }
  if (spec.bus_routes) {
    std::vector<size_t> ew, ns;
    for (int k = -7; k <= 7; ++k) {
      const double u = k == 0 ? 0.3 : k;
      std::optional<std::string> name;
      // Shares its name with the metro station 300 m south.
      if (k == -4 && spec.metro_lines >= 3) name = net.stations[at.at({-4000, 0})].name;
      ew.push_back(station_at(u, 0.3, Mode::kBus, name));
    }
    for (int k = -7; k <= 7; ++k) {
      const double u = k == 0 ? 0.3 : k;
      ns.push_back(station_at(0.3, u, Mode::kBus));
    }
    add_route("B1", Mode::kBus, ew);
    add_route("B2", Mode::kBus, ns);
  }
  if (spec.bus_chain) {
    const std::vector<std::vector<Xy>> legs = {
        {{5.0, 9.5}, {5.7, 9.5}, {6.4, 9.5}, {7.0, 9.5}},
        {{7.0, 9.5}, {7.0, 8.8}, {7.0, 8.1}, {7.0, 7.5}},
        {{7.0, 7.5}, {7.8, 7.5}, {8.6, 7.5}, {9.5, 7.5}},
        {{9.5, 7.5}, {9.5, 6.8}, {9.5, 6.1}, {9.5, 5.4}}};
    for (size_t c = 0; c < legs.size(); ++c) {
      std::vector<size_t> stops;
      for (const auto& p : legs[c]) stops.push_back(station_at(p.x, p.y, Mode::kBus));
      add_route("C" + std::to_string(c + 1), Mode::kBus, stops);
      if (c == 0) net.chain_first = {stops[0], stops[1]};
      if (c + 1 == legs.size()) net.chain_last = {stops[2], stops[3]};
    }
  }
  for (auto& s : net.stations) std::sort(s.line_ids.begin(), s.line_ids.end());
  return net;
}

// Smallest whole-minute ride-hailing time that passes the time gate.
int MinPassingMinutes(double t_pt, const ClassifierConfig& cfg) {
  for (int t = 1; t < 100000; ++t) {
    const bool ok = t <= cfg.time_gate_min ? t_pt - t <= cfg.time_gate_min
                                           : t_pt <= cfg.time_ratio * t;
    if (ok) return t;
  }
  return 100000;
}

class Generator {
 public:
  Generator(const ScenarioSpec& spec, const Plane& plane, const Network& net,
            const TransitNetwork& tn)
      : spec_(spec),
        plane_(plane),
        net_(net),
        tn_(tn),
        planner_(tn),
        lexicon_(StationLexicon(tn)),
        day0_(ParseTimestamp(spec.start_date + " 00:00")) {
    double total = 0;
    for (int h = 0; h < 24; ++h) total += std::max(0.0, spec.hour_weights[h]);
    if (!(total > 0)) throw ConfigError("synth: hour_weights must have positive mass");
    for (int h = 0; h < 24; ++h) {
      if (spec.hour_weights[h] > 0 && (h < 6 || h > 21)) {
        throw ConfigError("synth: daytime hour weights must lie in 06-21");
      }
    }
  }

  // One trip of the given kind, or nullopt when this draw did not work out.
  std::optional<TripRecord> Try(PlantedKind kind, Rng& rng) const {
    switch (kind) {
      case PlantedKind::kFirstMile:
      case PlantedKind::kLastMile:
        return Feeder(kind == PlantedKind::kFirstMile, rng);
      case PlantedKind::kViolateC1:
        return Night(rng);
      case PlantedKind::kViolateC3:
        return FarFromTransit(rng);
      case PlantedKind::kViolateC5:
        return Chain(rng);
      default:
        return Paired(kind, rng);
    }
  }

  bool Verify(const TripRecord& trip, PlantedKind kind) const {
    const PtAlternative alt = planner_.Plan(trip.origin, trip.destination);
    const TripClass c = ClassifyTrip(trip, &alt, tn_, lexicon_, cfg_);
    const GroundTruth want = TruthOf(kind);
    const std::optional<Condition> got =
        c.label == TripLabel::kIndependent ? c.failed_condition : std::nullopt;
    return c.label == want.label && got == want.violated;
  }

 private:
  Xy RandomXy(Rng& rng) const {
    const double h = spec_.half_size_km * 0.95;
    return {rng.Uniform(-h, h), rng.Uniform(-h, h)};
  }
  std::optional<Xy> Near(size_t s, double dmin_m, double dmax_m, Rng& rng) const {
    const double a = rng.Uniform(0, 2 * std::numbers::pi);
    const double d = rng.Uniform(dmin_m, dmax_m) / 1000.0;
    const Xy p{net_.xy[s].x + d * std::cos(a), net_.xy[s].y + d * std::sin(a)};
    const double h = spec_.half_size_km * 0.98;
    if (std::abs(p.x) > h || std::abs(p.y) > h) return std::nullopt;
    return p;
  }
  size_t AnyStation(Rng& rng) const {
    return static_cast<size_t>(rng.UniformInt(0, static_cast<int64_t>(net_.xy.size()) - 1));
  }
  std::string Address(Rng& rng) const {
    return "No. " + std::to_string(rng.UniformInt(1, 999)) + " " +
           std::string(kRoads[rng.UniformInt(0, std::size(kRoads) - 1)]) + " Road";
  }
  std::string StationLabel(size_t s, Rng& rng) const {
    const Station& st = net_.stations[s];
    static constexpr std::string_view kExits[] = {"Exit A", "Exit 2", "Gate 3", "Entrance B"};
    switch (rng.UniformInt(0, 3)) {
      case 0:
        return st.name;
      case 1:
        return st.aliases.front();
      case 2:
        return st.mode == Mode::kBus ? st.name + " Bus Stop" : st.aliases.back();
      default:
        return st.aliases.front() + " " +
               std::string(kExits[rng.UniformInt(0, std::size(kExits) - 1)]);
    }
  }
  Minutes DaytimeStart(Rng& rng) const {
    double total = 0;
    for (double w : spec_.hour_weights) total += std::max(0.0, w);
    double u = rng.Uniform() * total;
    int hour = 6;
    for (int h = 0; h < 24; ++h) {
      const double w = std::max(0.0, spec_.hour_weights[h]);
      if (w <= 0) continue;
      hour = h;
      if (u < w) break;
      u -= w;
    }
    const int64_t day = rng.UniformInt(0, spec_.days - 1);
    return day0_ + day * 1440 + hour * 60 + rng.UniformInt(0, 59);
  }

  // Fills the fields shared by every kind; duration and cost are natural.
  TripRecord Base(const Xy& o, const Xy& d, Minutes start, Rng& rng) const {
    TripRecord t;
    t.plate_id = "P" + std::to_string(rng.UniformInt(10000, 99999));
    t.origin = plane_.ToGeo(o.x, o.y);
    t.destination = plane_.ToGeo(d.x, d.y);
    const double straight = HaversineKm(t.origin, t.destination);
    t.distance_km = std::max(0.5, RoundTo(straight * rng.Uniform(1.15, 1.4), 1));
    const double minutes = t.distance_km / rng.Uniform(20.0, 32.0) * 60.0;
    t.pickup_time = start;
    t.dropoff_time = start + std::max<int64_t>(3, std::llround(minutes));
    t.cost = RoundTo(14.0 + 2.5 * std::max(0.0, t.distance_km - 3.0), 1);
    t.pickup_label = Address(rng);
    t.dropoff_label = Address(rng);
    if (spec_.with_request_time) t.request_time = start - rng.UniformInt(1, 8);
    return t;
  }
  void SetDuration(TripRecord& t, int64_t minutes) const {
    t.dropoff_time = t.pickup_time + minutes;
  }
  bool WalksWithin(const PtAlternative& a, double m) const {
    return a.available && a.access_walk_m <= m && a.egress_walk_m <= m;
  }
  // Duration at least one minute clear of the time gate.
  void PassTimeGate(TripRecord& t, const PtAlternative& a) const {
    const int64_t need = MinPassingMinutes(a.t_pt, cfg_) + 1;
    if (t.DurationMin() < need) SetDuration(t, need);
  }

  std::optional<TripRecord> Feeder(bool first_mile, Rng& rng) const {
    const size_t s = AnyStation(rng);
    const auto at_station = Near(s, 20, 150, rng);
    if (!at_station) return std::nullopt;
    const Xy other = RandomXy(rng);
    if (DistKm(other, *at_station) < 1.2) return std::nullopt;
    TripRecord t = first_mile ? Base(other, *at_station, DaytimeStart(rng), rng)
                              : Base(*at_station, other, DaytimeStart(rng), rng);
    if (first_mile) {
      t.dropoff_label = StationLabel(s, rng);
      // A few station-to-station rides.
      if (rng.Uniform() < 0.1) t.pickup_label = StationLabel(AnyStation(rng), rng);
    } else {
      t.pickup_label = StationLabel(s, rng);
    }
    return t;
  }

  std::optional<TripRecord> Night(Rng& rng) const {
    const Xy o = RandomXy(rng);
    const Xy d = RandomXy(rng);
    if (DistKm(o, d) < 1.0 || DistKm(o, d) > 15.0) return std::nullopt;
    const int64_t day = rng.UniformInt(0, spec_.days - 1);
    const Minutes start = day0_ + day * 1440 + rng.UniformInt(30, 210);
    TripRecord t = Base(o, d, start, rng);
    if (!net_.xy.empty() && rng.Uniform() < 0.2) t.dropoff_label = StationLabel(AnyStation(rng), rng);
    // Keep clear of the first departures.
    if (t.dropoff_time % 1440 > 5 * 60) return std::nullopt;
    return t;
  }

  std::optional<TripRecord> FarFromTransit(Rng& rng) const {
    Xy o, d;
    const bool near_miss = !net_.xy.empty() && rng.Uniform() < 0.8;
    if (near_miss) {
      const auto a = Near(AnyStation(rng), 410, 560, rng);
      const auto b = Near(AnyStation(rng), 40, 300, rng);
      if (!a || !b) return std::nullopt;
      const bool swap = rng.Uniform() < 0.5;
      o = swap ? *b : *a;
      d = swap ? *a : *b;
    } else {
      o = RandomXy(rng);
      d = RandomXy(rng);
    }
    if (DistKm(o, d) < 1.5 || DistKm(o, d) > 16.0) return std::nullopt;
    TripRecord t = Base(o, d, DaytimeStart(rng), rng);
    const PtAlternative a = planner_.Plan(t.origin, t.destination);
    if (a.available) {
      if (std::max(a.access_walk_m, a.egress_walk_m) < 420) return std::nullopt;
    }
    return t;
  }

  std::optional<TripRecord> Chain(Rng& rng) const {
    if (net_.chain_first.empty()) return std::nullopt;
    const auto o = Near(net_.chain_first[rng.UniformInt(0, 1)], 40, 300, rng);
    const auto d = Near(net_.chain_last[rng.UniformInt(0, 1)], 40, 300, rng);
    if (!o || !d) return std::nullopt;
    TripRecord t = Base(*o, *d, DaytimeStart(rng), rng);
    const PtAlternative a = planner_.Plan(t.origin, t.destination);
    if (!WalksWithin(a, 350) || a.transfers <= cfg_.max_transfers) return std::nullopt;
    PassTimeGate(t, a);
    return t;
  }

  // Substitutive, and the C4 / C6 violations: a station-to-station pair
  // reachable within the walk threshold and transfer limit.
  std::optional<TripRecord> Paired(PlantedKind kind, Rng& rng) const {
    const size_t s1 = AnyStation(rng);
    const size_t s2 = AnyStation(rng);
    if (s1 == s2) return std::nullopt;
    const auto o = Near(s1, 40, 300, rng);
    const auto d = Near(s2, 40, 300, rng);
    if (!o || !d || DistKm(*o, *d) < 1.5) return std::nullopt;
    TripRecord t = Base(*o, *d, DaytimeStart(rng), rng);
    const PtAlternative a = planner_.Plan(t.origin, t.destination);
    if (!WalksWithin(a, 350) || a.transfers > cfg_.max_transfers) return std::nullopt;
    if (kind == PlantedKind::kViolateC4) {
      const int64_t limit = MinPassingMinutes(a.t_pt, cfg_) - rng.UniformInt(2, 6);
      if (limit < 2) return std::nullopt;
      SetDuration(t, limit);
      // No faster than 90 km/h.
      if (t.distance_km / limit * 60.0 > 90.0) return std::nullopt;
      return t;
    }
    PassTimeGate(t, a);
    if (kind == PlantedKind::kViolateC6) {
      t.cost = RoundTo(a.fare * rng.Uniform(0.9, 1.6), 1);
      if (!(t.cost > 0 && t.cost < 2.0 * a.fare - 0.5)) return std::nullopt;
    } else if (spec_.substitutive_fare_share) {
      t.cost = a.fare / *spec_.substitutive_fare_share;
    } else {
      t.cost = std::max(t.cost, RoundTo(2.0 * a.fare + 2.0, 1));
    }
    return t;
  }

  const ScenarioSpec& spec_;
  const Plane& plane_;
  const Network& net_;
  const TransitNetwork& tn_;
  Planner planner_;
  LabelLexicon lexicon_;
  ClassifierConfig cfg_;
  Minutes day0_;
};

// Population density: a few Gaussian centers over a low base.
double DensityAt(double x, double y) {
  const double c[3][4] = {{0, 0, 3.0, 1.0}, {-5, 5, 2.0, 0.6}, {6, -5, 2.5, 0.5}};
  double v = 0.05;
  for (const auto& k : c) {
    const double r2 = (x - k[0]) * (x - k[0]) + (y - k[1]) * (y - k[1]);
    v += k[3] * std::exp(-r2 / (2 * k[2] * k[2]));
  }
  return v;
}

void AuxiliaryLayers(const ScenarioSpec& spec, const Plane& plane, Rng& rng,
                     Scenario& out) {
  const double h = spec.half_size_km;
  const double step = 0.2;
  const int n = static_cast<int>(std::lround(2 * h / step));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = -h + (i + 0.5) * step;
      const double y = -h + (j + 0.5) * step;
      out.population.push_back(
          {plane.ToGeo(x, y), std::round(DensityAt(x, y) * 20000.0 * step * step)});
    }
  }

  const double cat_weight[4] = {0.45, 0.25, 0.2, 0.1};
  const Xy centers[3] = {{0, 0}, {-5, 5}, {6, -5}};
  while (out.pois.size() < 4000) {
    Xy p;
    if (rng.Uniform() < 0.7) {
      const Xy c = centers[rng.UniformInt(0, 2)];
      p = {c.x + 2.0 * rng.Normal(), c.y + 2.0 * rng.Normal()};
    } else {
      p = {rng.Uniform(-h, h), rng.Uniform(-h, h)};
    }
    if (std::abs(p.x) >= h || std::abs(p.y) >= h) continue;
    double u = rng.Uniform();
    size_t k = 0;
    while (k + 1 < 4 && u >= cat_weight[k]) u -= cat_weight[k++];
    out.pois.push_back({plane.ToGeo(p.x, p.y), std::string(kPoiCategories[k])});
  }

  // 1 km street lattice; the ring at +-6 km and the main diagonal are
  // highways, plus some random diagonal shortcuts.
  ordered_json features = ordered_json::array();
  auto segment = [&](double x0, double y0, double x1, double y1, bool highway) {
    const GeoPoint a = plane.ToGeo(x0, y0), b = plane.ToGeo(x1, y1);
    ordered_json f;
    f["type"] = "Feature";
    f["properties"] = {{"highway", highway}};
    f["geometry"] = {{"type", "LineString"},
                     {"coordinates", {{a.lon, a.lat}, {b.lon, b.lat}}}};
    features.push_back(std::move(f));
  };
  const int m = static_cast<int>(std::floor(h));
  for (int i = -m; i <= m; ++i) {
    for (int j = -m; j < m; ++j) {
      segment(i, j, i, j + 1, std::abs(i) == 6 && std::abs(j) < 6 && std::abs(j + 1) <= 6);
      segment(j, i, j + 1, i, std::abs(i) == 6 && std::abs(j) < 6 && std::abs(j + 1) <= 6);
    }
  }
  for (int i = -m; i < m; ++i) {
    for (int j = -m; j < m; ++j) {
      if (i == j) {
        segment(i, j, i + 1, j + 1, true);
      } else if (rng.Uniform() < 0.3) {
        segment(i, j, i + 1, j + 1, false);
      }
    }
  }
  ordered_json roads = {{"type", "FeatureCollection"}, {"features", features}};
  out.roads_geojson = roads.dump();

  ordered_json districts = ordered_json::array();
  const char* names[4] = {"SW", "SE", "NW", "NE"};
  for (int q = 0; q < 4; ++q) {
    const double x0 = q % 2 == 0 ? -h : 0, y0 = q < 2 ? -h : 0;
    ordered_json ring = ordered_json::array();
    const Xy corners[5] = {{x0, y0}, {x0 + h, y0}, {x0 + h, y0 + h}, {x0, y0 + h}, {x0, y0}};
    for (const auto& c : corners) {
      const GeoPoint g = plane.ToGeo(c.x, c.y);
      ring.push_back({g.lon, g.lat});
    }
    ordered_json f;
    f["type"] = "Feature";
    f["properties"] = {{"id", names[q]}};
    f["geometry"] = {{"type", "Polygon"}, {"coordinates", {ring}}};
    districts.push_back(std::move(f));
  }
  out.districts_geojson =
      ordered_json({{"type", "FeatureCollection"}, {"features", districts}}).dump();
}

}  // namespace

Scenario GenerateScenario(const ScenarioSpec& spec) {
  if (!(spec.half_size_km >= 10.0)) throw ConfigError("synth: half_size_km must be >= 10");
  if (spec.days < 1) throw ConfigError("synth: days must be >= 1");
  for (int k = 0; k < kNumPlantedKinds; ++k) {
    if (spec.counts[k] < 0) throw ConfigError("synth: planted counts must be non-negative");
  }
  if (spec.substitutive_fare_share &&
      !(*spec.substitutive_fare_share > 0 && *spec.substitutive_fare_share <= 0.5)) {
    throw ConfigError("synth: substitutive_fare_share must lie in (0, 0.5]");
  }
  const Plane plane(spec.center);
  Network net = BuildNetwork(spec, plane);
  auto need = [&](PlantedKind k) { return spec.counts[static_cast<int>(k)] > 0; };
  const bool any_transit = !net.routes.empty();
  for (int k = 0; k < kNumPlantedKinds; ++k) {
    const auto kind = static_cast<PlantedKind>(k);
    if (!need(kind) || kind == PlantedKind::kViolateC1 || kind == PlantedKind::kViolateC3) {
      continue;
    }
    if (!any_transit) {
      throw ConfigError("synth: infeasible scenario: " + PlantedName(kind) +
                        " trips need a transit network");
    }
  }
  if (need(PlantedKind::kViolateC5) && !spec.bus_chain) {
    throw ConfigError("synth: infeasible scenario: C5 trips need the bus chain");
  }

  Scenario out;
  out.stations = net.stations;
  out.routes = net.routes;
  const double h = spec.half_size_km;
  const GeoPoint lo = plane.ToGeoRaw(-h, -h), hi = plane.ToGeoRaw(h, h);
  out.bbox = {lo.lon, lo.lat, hi.lon, hi.lat};
  TransitNetwork tn;
  if (any_transit) tn = TransitNetwork(net.stations, net.routes, out.fares);
  const Generator gen(spec, plane, net, tn);

  struct Planted {
    TripRecord trip;
    PlantedKind kind;
  };
  std::vector<Planted> planted;
  for (int k = 0; k < kNumPlantedKinds; ++k) {
    const auto kind = static_cast<PlantedKind>(k);
    Rng rng(DeriveSeed(spec.seed, 100 + k));
    for (int i = 0; i < spec.counts[k]; ++i) {
      bool placed = false;
      for (int attempt = 0; attempt < 500 && !placed; ++attempt) {
        auto trip = gen.Try(kind, rng);
        if (trip && trip->DurationMin() <= 65 && trip->distance_km <= 30 &&
            gen.Verify(*trip, kind)) {
          planted.push_back({std::move(*trip), kind});
          placed = true;
        }
      }
      if (!placed) {
        throw ConfigError("synth: infeasible scenario: could not place a " +
                          PlantedName(kind) + " trip");
      }
    }
  }
  std::stable_sort(planted.begin(), planted.end(), [](const auto& a, const auto& b) {
    return a.trip.pickup_time < b.trip.pickup_time;
  });
  for (auto& p : planted) {
    out.trips.push_back(std::move(p.trip));
    out.truth.push_back(TruthOf(p.kind));
  }
  if (out.trips.size() >= 4) {
    const auto iqr = IqrFilter(out.trips);
    if (!iqr.removed_indices.empty()) {
      throw InvariantError("synth: generated trips contain IQR outliers: " +
                           IqrReportsToJson(iqr.reports));
    }
  }
  if (spec.auxiliary_layers) {
    Rng rng(DeriveSeed(spec.seed, 7));
    AuxiliaryLayers(spec, plane, rng, out);
  }
  return out;
}

void WriteGroundTruthCsv(std::ostream& out, const std::vector<GroundTruth>& truth) {
  csv::WriteRecord(out, {"trip_index", "intended_class", "violated_condition"});
  for (size_t i = 0; i < truth.size(); ++i) {
    csv::WriteRecord(out, {std::to_string(i), std::string(TripLabelName(truth[i].label)),
                           truth[i].violated ? std::string(ConditionName(*truth[i].violated))
                                             : std::string()});
  }
}

std::vector<GroundTruth> ReadGroundTruthCsv(std::istream& in) {
  csv::Reader reader(in);
  const size_t ci = reader.RequireColumn("trip_index");
  const size_t cl = reader.RequireColumn("intended_class");
  const size_t cv = reader.RequireColumn("violated_condition");
  std::vector<GroundTruth> out;
  std::vector<std::string> f;
  size_t line = 0;
  bool malformed = false;
  while (reader.Next(f, line, malformed)) {
    if (malformed || f.size() <= std::max({ci, cl, cv})) {
      throw InputError("ground truth line " + std::to_string(line) + ": malformed record");
    }
    if (ParseInt(f[ci], "trip_index") != static_cast<int64_t>(out.size())) {
      throw InputError("ground truth line " + std::to_string(line) +
                       ": trip_index out of sequence");
    }
    GroundTruth g;
    g.label = ParseTripLabel(f[cl]);
    if (!f[cv].empty()) g.violated = ParseCondition(f[cv]);
    out.push_back(g);
  }
  return out;
}

void WriteScenario(const Scenario& s, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw InputError("cannot write " + (fs::path(dir) / name).string());
    return f;
  };
  {
    auto f = open("stations.csv");
    WriteStations(f, s.stations);
  }
  {
    auto f = open("routes.csv");
    WriteRoutes(f, s.routes);
  }
  {
    auto f = open("fares.txt");
    WriteFareRules(f, s.fares);
  }
  {
    auto f = open("trips.csv");
    WriteTrips(f, s.trips);
  }
  {
    auto f = open("ground_truth.csv");
    WriteGroundTruthCsv(f, s.truth);
  }
  if (!s.population.empty()) {
    auto f = open("population.csv");
    csv::WriteRecord(f, {"lon", "lat", "pop"});
    for (const auto& c : s.population) {
      csv::WriteRecord(f, {FormatDouble(c.location.lon), FormatDouble(c.location.lat),
                           FormatDouble(c.pop)});
    }
  }
  if (!s.pois.empty()) {
    auto f = open("pois.csv");
    csv::WriteRecord(f, {"lon", "lat", "category"});
    for (const auto& p : s.pois) {
      csv::WriteRecord(f, {FormatDouble(p.location.lon), FormatDouble(p.location.lat),
                           p.category});
    }
  }
  if (!s.roads_geojson.empty()) open("roads.geojson") << s.roads_geojson << '\n';
  if (!s.districts_geojson.empty()) open("districts.geojson") << s.districts_geojson << '\n';
}

}  // namespace tncpt
