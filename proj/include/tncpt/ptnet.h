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

// Public-transit network model and an offline journey planner producing the
// transit alternative (time, fare, transfers, access/egress walks, service
// windows) for an origin-destination pair.

#ifndef TNCPT_PTNET_H_
#define TNCPT_PTNET_H_

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tncpt/common.h"
#include "tncpt/ingest.h"
#include "tncpt/label.h"

namespace tncpt {

enum class Mode { kMetro, kBus };
std::string_view ModeName(Mode m);
Mode ParseMode(std::string_view s);

// Minutes after midnight; values >= 1440 denote service past midnight.
using TimeOfDay = int;
TimeOfDay ParseTimeOfDay(std::string_view s);
std::string FormatTimeOfDay(TimeOfDay t);

struct Station {
  std::string id;
  std::string name;
  std::vector<std::string> aliases;
  GeoPoint location;
  Mode mode = Mode::kMetro;
  std::vector<std::string> line_ids;  // Sorted, unique.

  bool is_hub() const { return line_ids.size() >= 2; }
};

struct Route {
  std::string id;
  std::string line_id;
  Mode mode = Mode::kMetro;
  std::vector<std::string> station_ids;
  double headway_min = 10.0;
  TimeOfDay service_start = 0;
  TimeOfDay service_end = 0;
  double speed_kmh = 30.0;
};

struct FareRules {
  double bus_flat = 2.0;
  double metro_base = 3.0;
  double metro_base_km = 6.0;
  double metro_step_fare = 1.0;
  double metro_step_km = 10.0;
  double walk_speed_kmh = 4.8;

  // Distance-banded metro fare for one contiguous metro ride.
  double MetroFare(double km) const;
};

// Reads "key = value" lines; '#' starts a comment. Unknown keys are errors.
FareRules ParseFareRules(std::istream& in);
void WriteFareRules(std::ostream& out, const FareRules& rules);

class TransitNetwork {
 public:
  TransitNetwork() = default;
  // Validates referential integrity and route invariants; throws InputError.
  TransitNetwork(std::vector<Station> stations, std::vector<Route> routes,
                 FareRules fares);

  const std::vector<Station>& stations() const { return stations_; }
  const std::vector<Route>& routes() const { return routes_; }
  const FareRules& fares() const { return fares_; }
  double walk_speed_kmh() const { return fares_.walk_speed_kmh; }

  std::optional<size_t> StationIndex(std::string_view id) const;
  const Station& StationById(std::string_view id) const;
  BoundingBox Bounds() const;

 private:
  std::vector<Station> stations_;
  std::vector<Route> routes_;
  FareRules fares_;
  std::unordered_map<std::string, size_t> station_index_;
};

// stations CSV: id,name,aliases(|),lon,lat,mode,line_ids(|)
// routes CSV:   id,line_id,mode,station_ids(|),headway_min,service_start,
//               service_end,speed_kmh
TransitNetwork LoadNetwork(std::istream& stations, std::istream& routes,
                           std::istream& fares);
TransitNetwork LoadNetworkFiles(const std::string& stations_path,
                                const std::string& routes_path,
                                const std::string& fares_path);
void WriteStations(std::ostream& out, const std::vector<Station>& stations);
void WriteRoutes(std::ostream& out, const std::vector<Route>& routes);

struct Leg {
  Mode mode = Mode::kMetro;
  std::string route_id;
  std::string line_id;
  std::string board_station;
  std::string alight_station;
  TimeOfDay service_start = 0;
  TimeOfDay service_end = 0;
  double walk_before_m = 0.0;  // Transfer walk preceding this leg.
  double wait_min = 0.0;
  double ride_min = 0.0;
  double ride_km = 0.0;
  friend bool operator==(const Leg&, const Leg&) = default;
};

struct PtAlternative {
  bool available = false;
  double access_walk_m = 0.0;
  double egress_walk_m = 0.0;
  double t_pt = 0.0;  // Door to door, minutes.
  int transfers = 0;
  double fare = 0.0;
  double generalized_cost = 0.0;
  std::vector<Leg> legs;
  friend bool operator==(const PtAlternative&, const PtAlternative&) = default;
};

nlohmann::json AlternativeToJson(const PtAlternative& alt);
PtAlternative AlternativeFromJson(const nlohmann::json& j);

struct PlannerConfig {
  double transfer_penalty_min = 5.0;
  double search_radius_m = 800.0;
  double transfer_radius_m = 250.0;
};

// Time-independent journey search. Nodes are (route, stop) boarding states
// plus alighted/walked station states; the objective is door-to-door time
// plus a per-transfer penalty. Waits are half a headway per boarding.
class Planner {
 public:
  Planner(const TransitNetwork& net, PlannerConfig config = {});

  // Never throws for in-range input: an unreachable OD, or a best journey
  // that boards and alights at the same station, is `available=false`.
  PtAlternative Plan(const GeoPoint& origin, const GeoPoint& destination) const;

  const TransitNetwork& network() const { return net_; }
  const PlannerConfig& config() const { return config_; }

  // Walking time in minutes for a straight-line distance in km.
  double WalkMin(double km) const { return km / net_.walk_speed_kmh() * 60.0; }
  // Ride time of one hop between consecutive stops of a route.
  double HopMin(size_t route, size_t pos_from, size_t pos_to) const;

 private:
  struct StopRef {
    size_t route;
    size_t pos;
  };
  struct Neighbor {
    size_t station;
    double km;
  };

  // Route of a boarding-layer node index in [0, num_board_nodes_).
  size_t RouteOfNode(size_t node) const;

  const TransitNetwork& net_;
  PlannerConfig config_;
  std::vector<std::vector<size_t>> route_stops_;  // Station indices.
  std::vector<std::vector<double>> hop_km_;       // hop_km_[r][p]: p -> p+1.
  std::vector<std::vector<StopRef>> station_stops_;
  std::vector<std::vector<Neighbor>> transfer_walks_;
  std::vector<size_t> node_base_;  // First boarding node of each route.
  // Each (route, stop) has a boarded node and a riding node; only the
  // latter may alight, so every leg rides at least one hop.
  size_t num_board_nodes_ = 0;
};

// Canonical generalized cost of a journey; the planner reports this value.
double GeneralizedCost(double transfer_penalty_min, double access_walk_min,
                       const std::vector<double>& transfer_walk_min,
                       const std::vector<double>& wait_min,
                       const std::vector<double>& ride_min, double egress_walk_min,
                       int transfers);

// True iff every leg's service window overlaps the closed trip interval
// [t1, t2] (absolute minutes); overlap at the trip start suffices.
bool IsInService(const PtAlternative& alt, Minutes t1, Minutes t2);
// Network-wide variant used when no alternative exists: any route running.
bool IsInService(const TransitNetwork& net, Minutes t1, Minutes t2);
bool WindowOverlaps(TimeOfDay start, TimeOfDay end, Minutes t1, Minutes t2);

// Station names and aliases keyed through the label normalizer.
LabelLexicon StationLexicon(const TransitNetwork& net,
                            const LabelNormalizerConfig& config = {});

// Alternatives keyed on (origin, destination) rounded to 5 decimals and the
// departure hour. Reads may run concurrently; inserts take an exclusive lock.
class AlternativeCache {
 public:
  static std::string CoordKey(const GeoPoint& p);

  std::optional<PtAlternative> Find(const GeoPoint& o, const GeoPoint& d,
                                    int hour) const;
  void Insert(const GeoPoint& o, const GeoPoint& d, int hour, PtAlternative alt);
  size_t size() const;

  // JSON lines: {"okey","dkey","hour","alternative"}; written in key order.
  void Load(std::istream& in);
  void Save(std::ostream& out) const;

 private:
  static std::string Key(const std::string& okey, const std::string& dkey,
                         int hour);
  mutable std::shared_mutex mu_;
  std::map<std::string, PtAlternative> entries_;
};

// Fills the cache for every trip not already present, planning in parallel.
// Returns the alternative of each trip in input order.
std::vector<PtAlternative> PlanAll(const Planner& planner,
                                   const std::vector<TripRecord>& trips,
                                   AlternativeCache& cache, int jobs = 0);

}  // namespace tncpt

#endif  // TNCPT_PTNET_H_
