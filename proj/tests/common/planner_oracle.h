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


// Random small transit networks and an exhaustive journey enumerator used
// to check the planner's generalized cost.

#ifndef TNCPT_TESTS_PLANNER_ORACLE_H_
#define TNCPT_TESTS_PLANNER_ORACLE_H_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "test_util.h"
#include "tncpt/common.h"
#include "tncpt/ptnet.h"

namespace tncpt::testing {

struct RandomCase {
  TransitNetwork net;
  std::vector<std::pair<GeoPoint, GeoPoint>> ods;
};

// 2..8 stations in a 3 km square, 1..3 routes, some stations clustered so
// transfer walks exist. ODs are drawn near random stations.
inline RandomCase MakeRandomCase(uint64_t seed, size_t num_ods = 20) {
  Rng rng(seed);
  const GeoPoint center{121.40, 31.20};
  const int n = static_cast<int>(rng.UniformInt(2, 8));
  std::vector<Station> stations;
  for (int i = 0; i < n; ++i) {
    Station s;
    s.id = "S" + std::to_string(i);
    s.name = "Stop " + std::to_string(i);
    if (i > 0 && rng.Uniform() < 0.3) {
      const int64_t k = rng.UniformInt(0, static_cast<int64_t>(stations.size()) - 1);
      const GeoPoint prev = stations[k].location;
      s.location = Offset(prev, rng.Uniform(-0.2, 0.2), rng.Uniform(-0.2, 0.2));
    } else {
      s.location = Offset(center, rng.Uniform(-1.5, 1.5), rng.Uniform(-1.5, 1.5));
    }
    stations.push_back(std::move(s));
  }
  std::vector<Route> routes;
  const int num_routes = static_cast<int>(rng.UniformInt(1, 3));
  for (int r = 0; r < num_routes; ++r) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.Shuffle(order);
    const int len = static_cast<int>(rng.UniformInt(2, n));
    Route route;
    route.id = "R" + std::to_string(r);
    route.line_id = "L" + std::to_string(r);
    route.mode = rng.Uniform() < 0.5 ? Mode::kMetro : Mode::kBus;
    for (int i = 0; i < len; ++i) route.station_ids.push_back(stations[order[i]].id);
    route.headway_min = 2.0 + rng.Uniform(0.0, 13.0);
    route.service_start = 300;
    route.service_end = 1400;
    route.speed_kmh = 12.0 + rng.Uniform(0.0, 30.0);
    for (int i = 0; i < len; ++i) {
      auto& lines = stations[order[i]].line_ids;
      lines.push_back(route.line_id);
    }
    routes.push_back(std::move(route));
  }
  for (auto& s : stations) {
    if (s.line_ids.empty()) s.line_ids.push_back("L0");
    std::sort(s.line_ids.begin(), s.line_ids.end());
    s.line_ids.erase(std::unique(s.line_ids.begin(), s.line_ids.end()), s.line_ids.end());
  }
  RandomCase c;
  c.net = TransitNetwork(stations, routes, FareRules{});
  for (size_t k = 0; k < num_ods; ++k) {
    const auto& a = c.net.stations()[rng.UniformInt(0, n - 1)].location;
    const auto& b = c.net.stations()[rng.UniformInt(0, n - 1)].location;
    c.ods.push_back({Offset(a, rng.Uniform(-0.6, 0.6), rng.Uniform(-0.6, 0.6)),
                     Offset(b, rng.Uniform(-0.6, 0.6), rng.Uniform(-0.6, 0.6))});
  }
  return c;
}

// Minimum generalized cost over every simple journey: walk to an access
// station, then legs that each ride one route in one direction, joined by
// a re-boarding at the same station or a short walk, then walk from an
// egress station other than the access station. No station is visited
// twice. Returns +inf when no journey exists.
class JourneyEnumerator {
 public:
  JourneyEnumerator(const TransitNetwork& net, const PlannerConfig& cfg)
      : net_(net), cfg_(cfg) {}

  double MinCost(const GeoPoint& o, const GeoPoint& d) {
    best_ = std::numeric_limits<double>::infinity();
    dest_ = d;
    const size_t n = net_.stations().size();
    for (size_t a = 0; a < n; ++a) {
      const double km = HaversineKm(o, net_.stations()[a].location);
      if (km * 1000.0 > cfg_.search_radius_m) continue;
      access_ = a;
      access_min_ = Walk(km);
      std::vector<bool> visited(n, false);
      visited[a] = true;
      Journey j;
      BoardAt(a, 0.0, visited, j);
    }
    return best_;
  }

 private:
  struct Journey {
    std::vector<double> walks, waits, rides;
  };

  double Walk(double km) const { return km / net_.walk_speed_kmh() * 60.0; }

  size_t Index(const std::string& id) const { return *net_.StationIndex(id); }

  void BoardAt(size_t s, double walk_min, std::vector<bool>& visited, Journey& j) {
    const auto& routes = net_.routes();
    for (const auto& route : routes) {
      for (size_t p = 0; p < route.station_ids.size(); ++p) {
        if (Index(route.station_ids[p]) != s) continue;
        for (int dir : {-1, 1}) {
          double ride = 0.0;
          std::vector<size_t> marked;
          for (long q = static_cast<long>(p) + dir;
               q >= 0 && q < static_cast<long>(route.station_ids.size()); q += dir) {
            const size_t prev = Index(route.station_ids[q - dir]);
            const size_t here = Index(route.station_ids[q]);
            if (visited[here]) break;
            ride += HaversineKm(net_.stations()[prev].location,
                                net_.stations()[here].location) /
                    route.speed_kmh * 60.0;
            visited[here] = true;
            marked.push_back(here);
            j.walks.push_back(j.rides.empty() ? 0.0 : walk_min);
            j.waits.push_back(route.headway_min / 2.0);
            j.rides.push_back(ride);
            Alighted(here, visited, j);
            j.walks.pop_back();
            j.waits.pop_back();
            j.rides.pop_back();
          }
          for (size_t m : marked) visited[m] = false;
        }
      }
    }
  }

  void Alighted(size_t s, std::vector<bool>& visited, Journey& j) {
    const auto& here = net_.stations()[s].location;
    const double egress_km = HaversineKm(dest_, here);
    if (s != access_ && egress_km * 1000.0 <= cfg_.search_radius_m) {
      const int transfers = static_cast<int>(j.rides.size()) - 1;
      const double gc = GeneralizedCost(cfg_.transfer_penalty_min, access_min_, j.walks,
                                        j.waits, j.rides, Walk(egress_km), transfers);
      best_ = std::min(best_, gc);
    }
    // Each extra boarding adds the penalty through `transfers`.
    BoardAt(s, 0.0, visited, j);
    for (size_t t = 0; t < net_.stations().size(); ++t) {
      if (t == s || visited[t]) continue;
      const double km = HaversineKm(here, net_.stations()[t].location);
      if (km * 1000.0 > cfg_.transfer_radius_m) continue;
      visited[t] = true;
      BoardAt(t, Walk(km), visited, j);
      visited[t] = false;
    }
  }

  const TransitNetwork& net_;
  PlannerConfig cfg_;
  GeoPoint dest_;
  size_t access_ = 0;
  double access_min_ = 0.0;
  double best_ = 0.0;
};

}  // namespace tncpt::testing

#endif  // TNCPT_TESTS_PLANNER_ORACLE_H_
