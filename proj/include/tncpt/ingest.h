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

// Trip record parsing, validation and IQR outlier filtering.

#ifndef TNCPT_INGEST_H_
#define TNCPT_INGEST_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tncpt/common.h"

namespace tncpt {

// Local wall-clock minutes since 1970-01-01 00:00 (no DST handling).
using Minutes = int64_t;

// Parses "YYYY/M/D HH:MM" (zero padding optional; '-' also accepted as the
// date separator).
Minutes ParseTimestamp(std::string_view text);
std::string FormatTimestamp(Minutes t);
inline int HourOfDay(Minutes t) {
  return static_cast<int>(((t % 1440) + 1440) % 1440 / 60);
}
inline int64_t DayIndex(Minutes t) { return t >= 0 ? t / 1440 : (t - 1439) / 1440; }

struct TripRecord {
  std::string plate_id;
  GeoPoint origin;
  std::string pickup_label;
  Minutes pickup_time = 0;
  GeoPoint destination;
  std::string dropoff_label;
  Minutes dropoff_time = 0;
  double distance_km = 0.0;
  double cost = 0.0;
  // Order request time; only present when the source schema carries it.
  std::optional<Minutes> request_time;

  double DurationMin() const {
    return static_cast<double>(dropoff_time - pickup_time);
  }
  std::optional<double> WaitMin() const {
    if (!request_time) return std::nullopt;
    return static_cast<double>(pickup_time - *request_time);
  }
  friend bool operator==(const TripRecord&, const TripRecord&) = default;
};

// Canonical column names, in file order.
inline constexpr std::string_view kTripColumns[] = {
    "plate_id", "olon",          "olat",         "pickup_label",
    "pickup_time", "dlon",       "dlat",         "dropoff_label",
    "dropoff_time", "distance_km", "cost"};
inline constexpr std::string_view kRequestTimeColumn = "request_time";

struct SchemaConfig {
  // Canonical column name -> header name in the source. Unmapped columns use
  // the canonical name.
  std::map<std::string, std::string> column_map;
  std::optional<BoundingBox> study_area;
};

struct Rejection {
  size_t row = 0;  // 1-based line number in the source file.
  std::string reason;
};

struct ParseResult {
  std::vector<TripRecord> trips;
  std::vector<Rejection> rejections;
};

// Throws InputError when a required column is missing. Rows that fail to
// parse or violate record invariants are logged, never dropped silently.
ParseResult ParseTrips(std::istream& in, const SchemaConfig& schema = {});

void WriteTrips(std::ostream& out, const std::vector<TripRecord>& trips);
// Header and fields as written by WriteTrips.
std::vector<std::string> TripHeader(bool with_request);
std::vector<std::string> TripFields(const TripRecord& t, bool with_request);
bool AnyRequestTime(const std::vector<TripRecord>& trips);
// One JSON object per line: {"row":N,"reason":"..."}.
void WriteRejections(std::ostream& out, const std::vector<Rejection>& rejections);

enum class IqrField { kTravelTime, kDistance };
std::string_view IqrFieldName(IqrField f);

struct IqrFilterReport {
  IqrField field = IqrField::kTravelTime;
  std::optional<int64_t> day;  // Set when quartiles are computed per day.
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  size_t removed_count = 0;
};

struct IqrFilterResult {
  std::vector<TripRecord> kept;
  std::vector<size_t> removed_indices;
  std::vector<IqrFilterReport> reports;
};

// Removes a trip iff its travel time or its distance falls outside
// [Q1 - k*IQR, Q3 + k*IQR] for that field. Quartiles are type-7 and are
// computed on the unfiltered population (or per pickup day when
// `per_day`). Throws InputError when fewer than 4 trips are available.
IqrFilterResult IqrFilter(const std::vector<TripRecord>& trips, double k = 3.0,
                          bool per_day = false);

std::string IqrReportsToJson(const std::vector<IqrFilterReport>& reports);

}  // namespace tncpt

#endif  // TNCPT_INGEST_H_
