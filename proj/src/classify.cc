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

#include "tncpt/classify.h"

#include <algorithm>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "tncpt/csv.h"

namespace tncpt {

namespace {

constexpr std::string_view kLabelNames[] = {
    "FirstMileComplementary", "LastMileComplementary", "Substitutive",
    "Independent"};

// Nearest candidate station to `p`; ties keep the lexicographically first id.
std::string NearestCandidate(const std::vector<std::string>& ids,
                             const TransitNetwork& net, const GeoPoint& p) {
  std::string best;
  double best_km = std::numeric_limits<double>::infinity();
  for (const auto& id : ids) {
    const auto idx = net.StationIndex(id);
    if (!idx) continue;
    const double km = HaversineKm(p, net.stations()[*idx].location);
    if (km < best_km) {
      best_km = km;
      best = id;
    }
  }
  return best.empty() ? ids.front() : best;
}

}  // namespace

std::string_view TripLabelName(TripLabel l) {
  return kLabelNames[static_cast<int>(l)];
}

TripLabel ParseTripLabel(std::string_view s) {
  for (int i = 0; i < kNumTripLabels; ++i) {
    if (kLabelNames[i] == s) return static_cast<TripLabel>(i);
  }
  throw InputError("unknown trip label '" + std::string(s) + "'");
}

std::string_view ConditionName(Condition c) {
  static constexpr std::string_view kNames[] = {"C1", "C2", "C3", "C4", "C5", "C6"};
  return kNames[static_cast<int>(c)];
}

Condition ParseCondition(std::string_view s) {
  for (int i = 0; i < 6; ++i) {
    if (ConditionName(static_cast<Condition>(i)) == s) return static_cast<Condition>(i);
  }
  throw InputError("unknown condition '" + std::string(s) + "'");
}

void ClassifierConfig::Validate() const {
  if (!(walk_threshold_m > 0)) throw ConfigError("walk_threshold_m must be positive");
  if (!(time_gate_min > 0)) throw ConfigError("time_gate_min must be positive");
  if (!(time_ratio > 0)) throw ConfigError("time_ratio must be positive");
  if (max_transfers <= 0) throw ConfigError("max_transfers must be positive");
  if (!(cost_ratio > 0 && cost_ratio <= 1)) {
    throw ConfigError("cost_ratio must lie in (0, 1]");
  }
}

TripClass ClassifyTrip(const TripRecord& trip, const PtAlternative* alt,
                       const TransitNetwork& net, const LabelLexicon& lexicon,
                       const ClassifierConfig& config) {
  if (alt == nullptr) throw InputError("alternative not prepared");
  TripClass c;
  const auto fail = [&](Condition cond) {
    c.trace[static_cast<int>(cond)] = false;
    c.label = TripLabel::kIndependent;
    c.failed_condition = cond;
    return c;
  };

  const bool in_service = alt->available
                              ? IsInService(*alt, trip.pickup_time, trip.dropoff_time)
                              : IsInService(net, trip.pickup_time, trip.dropoff_time);
  if (!in_service) return fail(Condition::kC1);
  c.trace[0] = true;

  const auto drop = lexicon.Match(trip.dropoff_label);
  const auto pick = lexicon.Match(trip.pickup_label);
  if (drop || pick) {
    c.trace[1] = true;
    if (drop) {
      c.label = TripLabel::kFirstMile;
      c.matched_station = NearestCandidate(*drop, net, trip.destination);
      c.both_ends_station = pick.has_value();
    } else {
      c.label = TripLabel::kLastMile;
      c.matched_station = NearestCandidate(*pick, net, trip.origin);
    }
    return c;
  }
  c.trace[1] = false;

  if (!alt->available || alt->access_walk_m > config.walk_threshold_m ||
      alt->egress_walk_m > config.walk_threshold_m) {
    return fail(Condition::kC3);
  }
  c.trace[2] = true;

  const double t_tnc = trip.DurationMin();
  const bool time_ok = t_tnc <= config.time_gate_min
                           ? alt->t_pt - t_tnc <= config.time_gate_min
                           : alt->t_pt <= config.time_ratio * t_tnc;
  if (!time_ok) return fail(Condition::kC4);
  c.trace[3] = true;

  if (alt->transfers > config.max_transfers) return fail(Condition::kC5);
  c.trace[4] = true;

  if (!(alt->fare <= config.cost_ratio * trip.cost)) return fail(Condition::kC6);
  c.trace[5] = true;
  c.label = TripLabel::kSubstitutive;
  return c;
}

std::vector<TripClass> ClassifyAll(const std::vector<TripRecord>& trips,
                                   const std::vector<PtAlternative>& alts,
                                   const TransitNetwork& net,
                                   const LabelLexicon& lexicon,
                                   const ClassifierConfig& config, int jobs) {
  config.Validate();
  if (alts.size() != trips.size()) throw InputError("alternative not prepared");
  std::vector<TripClass> out(trips.size());
  ParallelFor(trips.size(), jobs, [&](size_t i) {
    out[i] = ClassifyTrip(trips[i], &alts[i], net, lexicon, config);
  });
  return out;
}

ClassSummary Summarize(const std::vector<TripClass>& classes) {
  ClassSummary s;
  s.total = classes.size();
  for (const auto& c : classes) {
    ++s.counts[static_cast<int>(c.label)];
    if (c.failed_condition) ++s.failed[static_cast<int>(*c.failed_condition)];
    if (c.both_ends_station) ++s.both_ends_station;
  }
  return s;
}

std::string SummaryToJson(const ClassSummary& s) {
  nlohmann::ordered_json j;
  j["total"] = s.total;
  nlohmann::ordered_json counts, shares, failed;
  for (int i = 0; i < kNumTripLabels; ++i) {
    const auto l = static_cast<TripLabel>(i);
    counts[std::string(TripLabelName(l))] = s.counts[i];
    shares[std::string(TripLabelName(l))] = s.Share(l);
  }
  for (int i = 0; i < 6; ++i) {
    if (i == 1) continue;
    failed[std::string(ConditionName(static_cast<Condition>(i)))] = s.failed[i];
  }
  j["counts"] = counts;
  j["shares"] = shares;
  j["complementary_share"] =
      s.Share(TripLabel::kFirstMile) + s.Share(TripLabel::kLastMile);
  j["independent_by_condition"] = failed;
  j["both_ends_station"] = s.both_ends_station;
  return j.dump(2);
}

void WriteClassified(std::ostream& out, const std::vector<TripRecord>& trips,
                     const std::vector<TripClass>& classes) {
  if (trips.size() != classes.size()) {
    throw InvariantError("trip and class counts differ");
  }
  const bool with_request = AnyRequestTime(trips);
  auto header = TripHeader(with_request);
  for (const char* col : {"label", "failed_condition", "matched_station",
                          "both_ends_station"}) {
    header.emplace_back(col);
  }
  csv::WriteRecord(out, header);
  for (size_t i = 0; i < trips.size(); ++i) {
    auto row = TripFields(trips[i], with_request);
    const auto& c = classes[i];
    row.emplace_back(TripLabelName(c.label));
    row.emplace_back(c.failed_condition ? ConditionName(*c.failed_condition) : "");
    row.push_back(c.matched_station.value_or(""));
    row.emplace_back(c.both_ends_station ? "1" : "0");
    csv::WriteRecord(out, row);
  }
}

ClassifiedTrips ReadClassified(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::istringstream trips_in(text);
  ParseResult parsed = ParseTrips(trips_in);
  if (!parsed.rejections.empty()) {
    throw InputError("classified trips line " +
                     std::to_string(parsed.rejections.front().row) + ": " +
                     parsed.rejections.front().reason);
  }
  ClassifiedTrips result;
  result.trips = std::move(parsed.trips);

  std::istringstream labels_in(text);
  csv::Reader reader(labels_in);
  const size_t label_col = reader.RequireColumn("label");
  const size_t failed_col = reader.RequireColumn("failed_condition");
  const size_t station_col = reader.RequireColumn("matched_station");
  const size_t both_col = reader.RequireColumn("both_ends_station");
  std::vector<std::string> f;
  size_t line = 0;
  bool malformed = false;
  while (reader.Next(f, line, malformed)) {
    TripClass c;
    c.label = ParseTripLabel(f[label_col]);
    if (!f[failed_col].empty()) c.failed_condition = ParseCondition(f[failed_col]);
    if (!f[station_col].empty()) c.matched_station = f[station_col];
    c.both_ends_station = f[both_col] == "1";
    result.classes.push_back(std::move(c));
  }
  if (result.classes.size() != result.trips.size()) {
    throw InputError("classified trips: row count mismatch");
  }
  return result;
}

}  // namespace tncpt
