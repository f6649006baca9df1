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

// Condition-based recognition of the relationship between a ride-hailing
// trip and public transit. Six conditions are checked in order:
//   C1 transit in service during the trip
//   C2 drop-off (first mile) or pick-up (last mile) label is a station
//   C3 access and egress walks within the threshold
//   C4 transit time competitive with the trip time
//   C5 transfers within the limit
//   C6 transit fare sufficiently cheaper than the trip cost

#ifndef TNCPT_CLASSIFY_H_
#define TNCPT_CLASSIFY_H_

#include <array>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tncpt/ingest.h"
#include "tncpt/label.h"
#include "tncpt/ptnet.h"

namespace tncpt {

enum class TripLabel { kFirstMile, kLastMile, kSubstitutive, kIndependent };
inline constexpr int kNumTripLabels = 4;
std::string_view TripLabelName(TripLabel l);
TripLabel ParseTripLabel(std::string_view s);

enum class Condition { kC1 = 0, kC2, kC3, kC4, kC5, kC6 };
std::string_view ConditionName(Condition c);
Condition ParseCondition(std::string_view s);

struct ClassifierConfig {
  double walk_threshold_m = 400.0;
  double time_gate_min = 15.0;
  double time_ratio = 2.0;
  int max_transfers = 2;
  double cost_ratio = 0.5;

  // Throws ConfigError unless every threshold is positive and
  // cost_ratio <= 1.
  void Validate() const;
};

struct TripClass {
  TripLabel label = TripLabel::kIndependent;
  std::optional<Condition> failed_condition;
  std::optional<std::string> matched_station;
  bool both_ends_station = false;
  // Outcome of each condition that was evaluated; C2 records whether a
  // label matched. Conditions after the deciding one stay empty.
  std::array<std::optional<bool>, 6> trace;
  friend bool operator==(const TripClass&, const TripClass&) = default;
};

// `alt` is the planner output for the trip's OD and departure hour; a null
// pointer raises "alternative not prepared".
TripClass ClassifyTrip(const TripRecord& trip, const PtAlternative* alt,
                       const TransitNetwork& net, const LabelLexicon& lexicon,
                       const ClassifierConfig& config);

std::vector<TripClass> ClassifyAll(const std::vector<TripRecord>& trips,
                                   const std::vector<PtAlternative>& alts,
                                   const TransitNetwork& net,
                                   const LabelLexicon& lexicon,
                                   const ClassifierConfig& config, int jobs = 0);

struct ClassSummary {
  size_t total = 0;
  std::array<size_t, kNumTripLabels> counts{};
  std::array<size_t, 6> failed{};  // Independent trips by deciding condition.
  size_t both_ends_station = 0;

  double Share(TripLabel l) const {
    return total == 0 ? 0.0
                      : static_cast<double>(counts[static_cast<int>(l)]) /
                            static_cast<double>(total);
  }
};

ClassSummary Summarize(const std::vector<TripClass>& classes);
std::string SummaryToJson(const ClassSummary& summary);

// Trip columns followed by label,failed_condition,matched_station,
// both_ends_station.
void WriteClassified(std::ostream& out, const std::vector<TripRecord>& trips,
                     const std::vector<TripClass>& classes);

struct ClassifiedTrips {
  std::vector<TripRecord> trips;
  std::vector<TripClass> classes;
};
ClassifiedTrips ReadClassified(std::istream& in);

}  // namespace tncpt

#endif  // TNCPT_CLASSIFY_H_
