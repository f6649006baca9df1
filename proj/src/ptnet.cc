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

#include "tncpt/ptnet.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <nlohmann/json.hpp>
#include <queue>
#include <set>

#include "tncpt/csv.h"

namespace tncpt {

using nlohmann::json;

std::string_view ModeName(Mode m) { return m == Mode::kMetro ? "metro" : "bus"; }

Mode ParseMode(std::string_view s) {
  s = Trim(s);
  if (s == "metro" || s == "subway") return Mode::kMetro;
  if (s == "bus") return Mode::kBus;
  throw InputError("unknown mode '" + std::string(s) + "'");
}

TimeOfDay ParseTimeOfDay(std::string_view s) {
  s = Trim(s);
  const size_t colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw InputError("bad time of day '" + std::string(s) + "'");
  }
  const int64_t h = ParseInt(s.substr(0, colon), "hour");
  const int64_t m = ParseInt(s.substr(colon + 1), "minute");
  if (h < 0 || h > 47 || m < 0 || m > 59) {
    throw InputError("bad time of day '" + std::string(s) + "'");
  }
  return static_cast<TimeOfDay>(h * 60 + m);
}

std::string FormatTimeOfDay(TimeOfDay t) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d:%02d", t / 60, t % 60);
  return buf;
}

double FareRules::MetroFare(double km) const {
  if (km <= metro_base_km) return metro_base;
  return metro_base +
         metro_step_fare * std::ceil((km - metro_base_km) / metro_step_km);
}

FareRules ParseFareRules(std::istream& in) {
  FareRules r;
  const std::pair<std::string_view, double*> keys[] = {
      {"bus_flat", &r.bus_flat},
      {"metro_base", &r.metro_base},
      {"metro_base_km", &r.metro_base_km},
      {"metro_step_fare", &r.metro_step_fare},
      {"metro_step_km", &r.metro_step_km},
      {"walk_speed_kmh", &r.walk_speed_kmh}};
  std::string line;
  while (std::getline(in, line)) {
    std::string_view v = line;
    if (const size_t hash = v.find('#'); hash != std::string_view::npos) {
      v = v.substr(0, hash);
    }
    v = Trim(v);
    if (v.empty()) continue;
    const size_t eq = v.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("fare rules: expected key = value, got '" + std::string(v) + "'");
    }
    const std::string_view key = Trim(v.substr(0, eq));
    const auto it = std::find_if(std::begin(keys), std::end(keys),
                                 [&](const auto& k) { return k.first == key; });
    if (it == std::end(keys)) {
      throw InputError("fare rules: unknown key '" + std::string(key) + "'");
    }
    *it->second = ParseDouble(v.substr(eq + 1), key);
  }
  if (r.bus_flat < 0 || r.metro_base < 0 || r.metro_step_fare < 0 ||
      !(r.metro_step_km > 0) || r.metro_base_km < 0 || !(r.walk_speed_kmh > 0)) {
    throw InputError("fare rules: values out of range");
  }
  return r;
}

void WriteFareRules(std::ostream& out, const FareRules& r) {
  out << "bus_flat = " << FormatDouble(r.bus_flat) << '\n'
      << "metro_base = " << FormatDouble(r.metro_base) << '\n'
      << "metro_base_km = " << FormatDouble(r.metro_base_km) << '\n'
      << "metro_step_fare = " << FormatDouble(r.metro_step_fare) << '\n'
      << "metro_step_km = " << FormatDouble(r.metro_step_km) << '\n'
      << "walk_speed_kmh = " << FormatDouble(r.walk_speed_kmh) << '\n';
}

TransitNetwork::TransitNetwork(std::vector<Station> stations,
                               std::vector<Route> routes, FareRules fares)
    : stations_(std::move(stations)), routes_(std::move(routes)), fares_(fares) {
  for (size_t i = 0; i < stations_.size(); ++i) {
    auto& s = stations_[i];
    std::sort(s.line_ids.begin(), s.line_ids.end());
    s.line_ids.erase(std::unique(s.line_ids.begin(), s.line_ids.end()),
                     s.line_ids.end());
    if (s.id.empty()) throw InputError("station with empty id");
    if (s.line_ids.empty()) {
      throw InputError("station " + s.id + " has no line ids");
    }
    if (!station_index_.emplace(s.id, i).second) {
      throw InputError("duplicate station id " + s.id);
    }
  }
  std::set<std::string> route_ids;
  for (const auto& r : routes_) {
    if (!route_ids.insert(r.id).second) {
      throw InputError("duplicate route id " + r.id);
    }
    if (r.station_ids.size() < 2) {
      throw InputError("route " + r.id + " needs at least two stations");
    }
    for (const auto& sid : r.station_ids) {
      if (!station_index_.count(sid)) {
        throw InputError("route " + r.id + " references unknown station " + sid);
      }
    }
    if (!(r.headway_min > 0)) {
      throw InputError("route " + r.id + " has non-positive headway");
    }
    if (!(r.service_start < r.service_end)) {
      throw InputError("route " + r.id + " service_start must precede service_end");
    }
    if (!(r.speed_kmh > 0)) throw InputError("route " + r.id + " has non-positive speed");
  }
}

std::optional<size_t> TransitNetwork::StationIndex(std::string_view id) const {
  auto it = station_index_.find(std::string(id));
  if (it == station_index_.end()) return std::nullopt;
  return it->second;
}

const Station& TransitNetwork::StationById(std::string_view id) const {
  auto idx = StationIndex(id);
  if (!idx) throw InputError("unknown station " + std::string(id));
  return stations_[*idx];
}

BoundingBox TransitNetwork::Bounds() const {
  BoundingBox b{std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity()};
  for (const auto& s : stations_) {
    b.min_lon = std::min(b.min_lon, s.location.lon);
    b.min_lat = std::min(b.min_lat, s.location.lat);
    b.max_lon = std::max(b.max_lon, s.location.lon);
    b.max_lat = std::max(b.max_lat, s.location.lat);
  }
  return b;
}

namespace {

std::vector<std::string> SplitList(std::string_view s) {
  std::vector<std::string> out;
  if (Trim(s).empty()) return out;
  for (auto& part : Split(s, '|')) {
    if (!part.empty()) out.push_back(std::move(part));
  }
  return out;
}

std::string JoinList(const std::vector<std::string>& v) { return Join(v, "|"); }

template <typename Fn>
void ForEachRow(std::istream& in, std::string_view what,
                const std::vector<std::string_view>& required, Fn&& fn) {
  csv::Reader reader(in);
  if (!reader.has_header()) throw InputError(std::string(what) + " file is empty");
  std::vector<size_t> cols;
  for (auto name : required) cols.push_back(reader.RequireColumn(name));
  std::vector<std::string> f;
  size_t line = 0;
  bool malformed = false;
  while (reader.Next(f, line, malformed)) {
    if (malformed || f.size() != reader.header().size()) {
      throw InputError(std::string(what) + " line " + std::to_string(line) +
                       ": malformed record");
    }
    std::vector<std::string> row;
    for (size_t c : cols) row.push_back(f[c]);
    try {
      fn(row);
    } catch (const InputError& e) {
      throw InputError(std::string(what) + " line " + std::to_string(line) + ": " +
                       e.what());
    }
  }
}

}  // namespace

TransitNetwork LoadNetwork(std::istream& stations_in, std::istream& routes_in,
                           std::istream& fares_in) {
  std::vector<Station> stations;
  ForEachRow(stations_in, "stations",
             {"id", "name", "aliases", "lon", "lat", "mode", "line_ids"},
             [&](const std::vector<std::string>& r) {
               Station s;
               s.id = r[0];
               s.name = r[1];
               s.aliases = SplitList(r[2]);
               s.location = {ParseDouble(r[3], "lon"), ParseDouble(r[4], "lat")};
               s.mode = ParseMode(r[5]);
               s.line_ids = SplitList(r[6]);
               stations.push_back(std::move(s));
             });
  std::vector<Route> routes;
  ForEachRow(routes_in, "routes",
             {"id", "line_id", "mode", "station_ids", "headway_min", "service_start",
              "service_end", "speed_kmh"},
             [&](const std::vector<std::string>& r) {
               Route route;
               route.id = r[0];
               route.line_id = r[1];
               route.mode = ParseMode(r[2]);
               route.station_ids = SplitList(r[3]);
               route.headway_min = ParseDouble(r[4], "headway_min");
               route.service_start = ParseTimeOfDay(r[5]);
               route.service_end = ParseTimeOfDay(r[6]);
               route.speed_kmh = ParseDouble(r[7], "speed_kmh");
               routes.push_back(std::move(route));
             });
  return TransitNetwork(std::move(stations), std::move(routes),
                        ParseFareRules(fares_in));
}

TransitNetwork LoadNetworkFiles(const std::string& stations_path,
                                const std::string& routes_path,
                                const std::string& fares_path) {
  std::ifstream s(stations_path), r(routes_path), f(fares_path);
  if (!s) throw InputError("cannot open " + stations_path);
  if (!r) throw InputError("cannot open " + routes_path);
  if (!f) throw InputError("cannot open " + fares_path);
  return LoadNetwork(s, r, f);
}

void WriteStations(std::ostream& out, const std::vector<Station>& stations) {
  csv::WriteRecord(out, {"id", "name", "aliases", "lon", "lat", "mode", "line_ids"});
  for (const auto& s : stations) {
    csv::WriteRecord(out, {s.id, s.name, JoinList(s.aliases),
                           FormatDouble(s.location.lon), FormatDouble(s.location.lat),
                           std::string(ModeName(s.mode)), JoinList(s.line_ids)});
  }
}

void WriteRoutes(std::ostream& out, const std::vector<Route>& routes) {
  csv::WriteRecord(out, {"id", "line_id", "mode", "station_ids", "headway_min",
                         "service_start", "service_end", "speed_kmh"});
  for (const auto& r : routes) {
    csv::WriteRecord(out, {r.id, r.line_id, std::string(ModeName(r.mode)),
                           JoinList(r.station_ids), FormatDouble(r.headway_min),
                           FormatTimeOfDay(r.service_start),
                           FormatTimeOfDay(r.service_end), FormatDouble(r.speed_kmh)});
  }
}

json AlternativeToJson(const PtAlternative& alt) {
  json legs = json::array();
  for (const auto& l : alt.legs) {
    legs.push_back({{"mode", ModeName(l.mode)},
                    {"route_id", l.route_id},
                    {"line_id", l.line_id},
                    {"board", l.board_station},
                    {"alight", l.alight_station},
                    {"service_start", FormatTimeOfDay(l.service_start)},
                    {"service_end", FormatTimeOfDay(l.service_end)},
                    {"walk_before_m", l.walk_before_m},
                    {"wait_min", l.wait_min},
                    {"ride_min", l.ride_min},
                    {"ride_km", l.ride_km}});
  }
  return {{"available", alt.available},
          {"access_walk_m", alt.access_walk_m},
          {"egress_walk_m", alt.egress_walk_m},
          {"t_pt", alt.t_pt},
          {"transfers", alt.transfers},
          {"fare", alt.fare},
          {"generalized_cost", alt.generalized_cost},
          {"legs", std::move(legs)}};
}

PtAlternative AlternativeFromJson(const json& j) {
  try {
    PtAlternative alt;
    alt.available = j.at("available").get<bool>();
    alt.access_walk_m = j.at("access_walk_m").get<double>();
    alt.egress_walk_m = j.at("egress_walk_m").get<double>();
    alt.t_pt = j.at("t_pt").get<double>();
    alt.transfers = j.at("transfers").get<int>();
    alt.fare = j.at("fare").get<double>();
    alt.generalized_cost = j.value("generalized_cost", 0.0);
    for (const auto& l : j.at("legs")) {
      Leg leg;
      leg.mode = ParseMode(l.at("mode").get<std::string>());
      leg.route_id = l.at("route_id").get<std::string>();
      leg.line_id = l.value("line_id", std::string());
      leg.board_station = l.at("board").get<std::string>();
      leg.alight_station = l.at("alight").get<std::string>();
      leg.service_start = ParseTimeOfDay(l.at("service_start").get<std::string>());
      leg.service_end = ParseTimeOfDay(l.at("service_end").get<std::string>());
      leg.walk_before_m = l.value("walk_before_m", 0.0);
      leg.wait_min = l.value("wait_min", 0.0);
      leg.ride_min = l.value("ride_min", 0.0);
      leg.ride_km = l.value("ride_km", 0.0);
      alt.legs.push_back(std::move(leg));
    }
    if (alt.available && (!(alt.t_pt > 0) || alt.transfers < 0 || alt.fare < 0)) {
      throw InputError("alternative violates invariants");
    }
    return alt;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed alternative: ") + e.what());
  }
}

double GeneralizedCost(double transfer_penalty_min, double access_walk_min,
                       const std::vector<double>& transfer_walk_min,
                       const std::vector<double>& wait_min,
                       const std::vector<double>& ride_min, double egress_walk_min,
                       int transfers) {
  double t = access_walk_min;
  for (size_t i = 0; i < ride_min.size(); ++i) {
    if (i < transfer_walk_min.size()) t += transfer_walk_min[i];
    t += wait_min[i];
    t += ride_min[i];
  }
  t += egress_walk_min;
  return t + transfer_penalty_min * transfers;
}

Planner::Planner(const TransitNetwork& net, PlannerConfig config)
    : net_(net), config_(config) {
  const auto& stations = net_.stations();
  station_stops_.resize(stations.size());
  for (size_t r = 0; r < net_.routes().size(); ++r) {
    const auto& route = net_.routes()[r];
    node_base_.push_back(num_board_nodes_);
    num_board_nodes_ += route.station_ids.size();
    std::vector<size_t> stops;
    for (size_t p = 0; p < route.station_ids.size(); ++p) {
      const size_t s = *net_.StationIndex(route.station_ids[p]);
      stops.push_back(s);
      station_stops_[s].push_back({r, p});
    }
    std::vector<double> hops;
    for (size_t p = 0; p + 1 < stops.size(); ++p) {
      hops.push_back(HaversineKm(stations[stops[p]].location,
                                 stations[stops[p + 1]].location));
    }
    route_stops_.push_back(std::move(stops));
    hop_km_.push_back(std::move(hops));
  }
  transfer_walks_.resize(stations.size());
  for (size_t a = 0; a < stations.size(); ++a) {
    for (size_t b = 0; b < stations.size(); ++b) {
      if (a == b) continue;
      const double km = HaversineKm(stations[a].location, stations[b].location);
      if (km * 1000.0 <= config_.transfer_radius_m) {
        transfer_walks_[a].push_back({b, km});
      }
    }
  }
}

size_t Planner::RouteOfNode(size_t node) const {
  return static_cast<size_t>(
      std::upper_bound(node_base_.begin(), node_base_.end(), node) - node_base_.begin() - 1);
}

double Planner::HopMin(size_t route, size_t pos_from, size_t pos_to) const {
  const size_t p = std::min(pos_from, pos_to);
  return hop_km_[route][p] / net_.routes()[route].speed_kmh * 60.0;
}

PtAlternative Planner::Plan(const GeoPoint& origin,
                            const GeoPoint& destination) const {
  const auto& stations = net_.stations();
  const size_t num_stations = stations.size();
  // Boarded nodes [0, B) can only ride; riding nodes [B, 2B) may alight.
  const size_t riding_base = num_board_nodes_;
  const size_t alighted_base = 2 * num_board_nodes_;
  const size_t walked_base = alighted_base + num_stations;
  const size_t num_nodes = walked_base + num_stations;
  const double radius_km = config_.search_radius_m / 1000.0;
  const double penalty = config_.transfer_penalty_min;

  std::vector<std::pair<size_t, double>> access, egress;
  std::vector<double> egress_km(num_stations, -1.0);
  for (size_t s = 0; s < num_stations; ++s) {
    const double ko = HaversineKm(origin, stations[s].location);
    if (ko <= radius_km && !station_stops_[s].empty()) access.push_back({s, ko});
    const double kd = HaversineKm(destination, stations[s].location);
    if (kd <= radius_km && !station_stops_[s].empty()) {
      egress.push_back({s, kd});
      egress_km[s] = kd;
    }
  }
  PtAlternative best;
  if (access.empty() || egress.empty()) return best;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr size_t kNone = std::numeric_limits<size_t>::max();
  std::vector<double> dist(num_nodes);
  std::vector<size_t> pred(num_nodes);
  double best_cost = kInf;

  for (const auto& [source, access_km] : access) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(pred.begin(), pred.end(), kNone);
    using Item = std::pair<double, size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    const double access_min = WalkMin(access_km);
    for (const auto& ref : station_stops_[source]) {
      const size_t node = node_base_[ref.route] + ref.pos;
      const double c = access_min + net_.routes()[ref.route].headway_min / 2.0;
      if (c < dist[node]) {
        dist[node] = c;
        pq.push({c, node});
      }
    }
    const auto relax = [&](size_t from, size_t to, double w) {
      const double c = dist[from] + w;
      if (c < dist[to]) {
        dist[to] = c;
        pred[to] = from;
        pq.push({c, to});
      }
    };
    const auto board_from = [&](size_t from, size_t station) {
      for (const auto& ref : station_stops_[station]) {
        relax(from, node_base_[ref.route] + ref.pos,
              net_.routes()[ref.route].headway_min / 2.0 + penalty);
      }
    };
    while (!pq.empty()) {
      const auto [c, node] = pq.top();
      pq.pop();
      if (c > dist[node]) continue;
      if (node < alighted_base) {
        const size_t b = node % num_board_nodes_;
        const size_t r = RouteOfNode(b);
        const size_t p = b - node_base_[r];
        const size_t n_stops = route_stops_[r].size();
        if (p + 1 < n_stops) relax(node, riding_base + b + 1, HopMin(r, p, p + 1));
        if (p > 0) relax(node, riding_base + b - 1, HopMin(r, p, p - 1));
        if (node >= riding_base) relax(node, alighted_base + route_stops_[r][p], 0.0);
      } else if (node < walked_base) {
        const size_t s = node - alighted_base;
        board_from(node, s);
        for (const auto& nb : transfer_walks_[s]) {
          relax(node, walked_base + nb.station, WalkMin(nb.km));
        }
      } else {
        board_from(node, node - walked_base);
      }
    }

    // Best egress station for this source, compared on the canonical cost.
    for (const auto& [s, km] : egress) {
      if (s == source) continue;
      const size_t end = alighted_base + s;
      if (dist[end] == kInf) continue;

      // Rebuild legs from the predecessor chain.
      std::vector<size_t> path;
      for (size_t n = end; n != kNone; n = pred[n]) path.push_back(n);
      std::reverse(path.begin(), path.end());

      PtAlternative alt;
      alt.available = true;
      alt.access_walk_m = access_km * 1000.0;
      alt.egress_walk_m = km * 1000.0;
      std::vector<double> walks, waits, rides;
      double pending_walk_km = 0.0;
      size_t i = 0;
      while (i < path.size()) {
        const size_t n = path[i];
        if (n >= walked_base) {
          const size_t from = path[i - 1] - alighted_base;
          pending_walk_km = HaversineKm(stations[from].location,
                                        stations[n - walked_base].location);
          ++i;
          continue;
        }
        if (n >= alighted_base) {
          ++i;
          continue;
        }
        // A boarded node and the riding nodes after it form a leg.
        const size_t r = RouteOfNode(n);
        const auto& route = net_.routes()[r];
        Leg leg;
        leg.mode = route.mode;
        leg.route_id = route.id;
        leg.line_id = route.line_id;
        leg.service_start = route.service_start;
        leg.service_end = route.service_end;
        leg.walk_before_m = pending_walk_km * 1000.0;
        leg.wait_min = route.headway_min / 2.0;
        size_t p = n - node_base_[r];
        leg.board_station = stations[route_stops_[r][p]].id;
        ++i;
        while (i < path.size() && path[i] >= riding_base && path[i] < alighted_base) {
          const size_t q = path[i] - riding_base - node_base_[r];
          leg.ride_min += HopMin(r, p, q);
          leg.ride_km += hop_km_[r][std::min(p, q)];
          p = q;
          ++i;
        }
        leg.alight_station = stations[route_stops_[r][p]].id;
        walks.push_back(alt.legs.empty() ? 0.0 : WalkMin(pending_walk_km));
        waits.push_back(leg.wait_min);
        rides.push_back(leg.ride_min);
        pending_walk_km = 0.0;
        alt.legs.push_back(std::move(leg));
      }
      alt.transfers = static_cast<int>(alt.legs.size()) - 1;
      alt.generalized_cost = GeneralizedCost(penalty, access_min, walks, waits,
                                             rides, WalkMin(km), alt.transfers);
      alt.t_pt = alt.generalized_cost - penalty * alt.transfers;
      // Fare: flat per bus boarding, banded per contiguous metro run.
      double metro_km = 0.0;
      bool in_metro = false;
      for (const auto& leg : alt.legs) {
        if (leg.mode == Mode::kMetro) {
          metro_km += leg.ride_km;
          in_metro = true;
        } else {
          if (in_metro) alt.fare += net_.fares().MetroFare(metro_km);
          metro_km = 0.0;
          in_metro = false;
          alt.fare += net_.fares().bus_flat;
        }
      }
      if (in_metro) alt.fare += net_.fares().MetroFare(metro_km);

      if (alt.generalized_cost < best_cost) {
        best_cost = alt.generalized_cost;
        best = std::move(alt);
      }
    }
  }
  if (best.available && !best.legs.empty() &&
      best.legs.front().board_station == best.legs.back().alight_station) {
    return PtAlternative{};
  }
  return best;
}

bool WindowOverlaps(TimeOfDay start, TimeOfDay end, Minutes t1, Minutes t2) {
  const Minutes tod1 = ((t1 % 1440) + 1440) % 1440;
  const Minutes tod2 = tod1 + (t2 - t1);
  for (Minutes shift : {-1440, 0, 1440}) {
    if (start + shift <= tod2 && tod1 <= end + shift) return true;
  }
  return false;
}

bool IsInService(const PtAlternative& alt, Minutes t1, Minutes t2) {
  if (!alt.available || alt.legs.empty()) return false;
  return std::all_of(alt.legs.begin(), alt.legs.end(), [&](const Leg& l) {
    return WindowOverlaps(l.service_start, l.service_end, t1, t2);
  });
}

bool IsInService(const TransitNetwork& net, Minutes t1, Minutes t2) {
  return std::any_of(net.routes().begin(), net.routes().end(), [&](const Route& r) {
    return WindowOverlaps(r.service_start, r.service_end, t1, t2);
  });
}

LabelLexicon StationLexicon(const TransitNetwork& net,
                            const LabelNormalizerConfig& config) {
  LabelLexicon lex(config);
  for (const auto& s : net.stations()) {
    lex.Add(s.name, s.id);
    for (const auto& a : s.aliases) lex.Add(a, s.id);
  }
  return lex;
}

std::string AlternativeCache::CoordKey(const GeoPoint& p) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.5f,%.5f", RoundTo(p.lon, 5), RoundTo(p.lat, 5));
  return buf;
}

std::string AlternativeCache::Key(const std::string& okey, const std::string& dkey,
                                  int hour) {
  return okey + "|" + dkey + "|" + std::to_string(hour);
}

std::optional<PtAlternative> AlternativeCache::Find(const GeoPoint& o,
                                                    const GeoPoint& d,
                                                    int hour) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(Key(CoordKey(o), CoordKey(d), hour));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void AlternativeCache::Insert(const GeoPoint& o, const GeoPoint& d, int hour,
                              PtAlternative alt) {
  std::unique_lock lock(mu_);
  entries_.insert_or_assign(Key(CoordKey(o), CoordKey(d), hour), std::move(alt));
}

size_t AlternativeCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

void AlternativeCache::Load(std::istream& in) {
  std::unique_lock lock(mu_);
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (Trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      entries_.insert_or_assign(
          Key(j.at("okey").get<std::string>(), j.at("dkey").get<std::string>(),
              j.at("hour").get<int>()),
          AlternativeFromJson(j.at("alternative")));
    } catch (const json::exception& e) {
      throw InputError("alternative cache line " + std::to_string(n) + ": " + e.what());
    }
  }
}

void AlternativeCache::Save(std::ostream& out) const {
  std::shared_lock lock(mu_);
  for (const auto& [key, alt] : entries_) {
    const size_t a = key.find('|');
    const size_t b = key.find('|', a + 1);
    json j = {{"okey", key.substr(0, a)},
              {"dkey", key.substr(a + 1, b - a - 1)},
              {"hour", std::stoi(key.substr(b + 1))},
              {"alternative", AlternativeToJson(alt)}};
    out << j.dump() << '\n';
  }
}

std::vector<PtAlternative> PlanAll(const Planner& planner,
                                   const std::vector<TripRecord>& trips,
                                   AlternativeCache& cache, int jobs) {
  std::vector<std::optional<PtAlternative>> cached(trips.size());
  std::vector<size_t> missing;
  for (size_t i = 0; i < trips.size(); ++i) {
    const auto& t = trips[i];
    cached[i] = cache.Find(t.origin, t.destination, HourOfDay(t.pickup_time));
    if (!cached[i]) missing.push_back(i);
  }
  std::vector<PtAlternative> planned(missing.size());
  ParallelFor(missing.size(), jobs, [&](size_t k) {
    const auto& t = trips[missing[k]];
    planned[k] = planner.Plan(t.origin, t.destination);
  });
  // Sequential inserts keep first-writer-wins deterministic for shared keys.
  for (size_t k = 0; k < missing.size(); ++k) {
    const auto& t = trips[missing[k]];
    const int hour = HourOfDay(t.pickup_time);
    if (!cache.Find(t.origin, t.destination, hour)) {
      cache.Insert(t.origin, t.destination, hour, planned[k]);
    }
  }
  std::vector<PtAlternative> out(trips.size());
  for (size_t i = 0; i < trips.size(); ++i) {
    const auto& t = trips[i];
    out[i] = *cache.Find(t.origin, t.destination, HourOfDay(t.pickup_time));
  }
  return out;
}

}  // namespace tncpt
