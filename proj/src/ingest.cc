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

#include "tncpt/ingest.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <nlohmann/json.hpp>

#include "tncpt/csv.h"

namespace tncpt {

namespace {

using nlohmann::json;

int ParseSmallInt(std::string_view s, std::string_view full) {
  if (s.empty() || s.size() > 4 ||
      !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw InputError("bad timestamp '" + std::string(full) + "'");
  }
  return static_cast<int>(ParseInt(s, "timestamp"));
}

}  // namespace

Minutes ParseTimestamp(std::string_view text) {
  const std::string_view full = Trim(text);
  const size_t space = full.find(' ');
  if (space == std::string_view::npos) {
    throw InputError("bad timestamp '" + std::string(full) + "'");
  }
  const std::string_view date = full.substr(0, space);
  const std::string_view clock = Trim(full.substr(space + 1));
  const char sep = date.find('/') != std::string_view::npos ? '/' : '-';
  const size_t d1 = date.find(sep);
  const size_t d2 = d1 == std::string_view::npos ? d1 : date.find(sep, d1 + 1);
  const size_t c1 = clock.find(':');
  if (d2 == std::string_view::npos || c1 == std::string_view::npos) {
    throw InputError("bad timestamp '" + std::string(full) + "'");
  }
  const int year = ParseSmallInt(date.substr(0, d1), full);
  const int month = ParseSmallInt(date.substr(d1 + 1, d2 - d1 - 1), full);
  const int day = ParseSmallInt(date.substr(d2 + 1), full);
  const int hour = ParseSmallInt(clock.substr(0, c1), full);
  const int minute = ParseSmallInt(clock.substr(c1 + 1), full);
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{static_cast<unsigned>(month)},
                                        std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59) {
    throw InputError("bad timestamp '" + std::string(full) + "'");
  }
  const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
  return static_cast<Minutes>(days) * 1440 + hour * 60 + minute;
}

std::string FormatTimestamp(Minutes t) {
  const int64_t day = DayIndex(t);
  const int64_t tod = t - day * 1440;
  const std::chrono::year_month_day ymd{
      std::chrono::sys_days{std::chrono::days{day}}};
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%d/%u/%u %02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod / 60), static_cast<int>(tod % 60));
  return buf;
}

ParseResult ParseTrips(std::istream& in, const SchemaConfig& schema) {
  csv::Reader reader(in);
  ParseResult result;
  if (!reader.has_header()) throw InputError("trip file has no header row");

  const auto mapped = [&](std::string_view canonical) {
    auto it = schema.column_map.find(std::string(canonical));
    return it == schema.column_map.end() ? std::string(canonical) : it->second;
  };
  size_t col[std::size(kTripColumns)];
  for (size_t i = 0; i < std::size(kTripColumns); ++i) {
    col[i] = reader.RequireColumn(mapped(kTripColumns[i]));
  }
  const std::optional<size_t> request_col =
      reader.Column(mapped(kRequestTimeColumn));

  std::vector<std::string> f;
  size_t line = 0;
  bool malformed = false;
  while (reader.Next(f, line, malformed)) {
    if (malformed) {
      result.rejections.push_back({line, "unterminated quote"});
      continue;
    }
    if (f.size() != reader.header().size()) {
      result.rejections.push_back(
          {line, "expected " + std::to_string(reader.header().size()) +
                     " fields, found " + std::to_string(f.size())});
      continue;
    }
    TripRecord t;
    try {
      t.plate_id = f[col[0]];
      t.origin = {ParseDouble(f[col[1]], "olon"), ParseDouble(f[col[2]], "olat")};
      t.pickup_label = f[col[3]];
      t.pickup_time = ParseTimestamp(f[col[4]]);
      t.destination = {ParseDouble(f[col[5]], "dlon"),
                       ParseDouble(f[col[6]], "dlat")};
      t.dropoff_label = f[col[7]];
      t.dropoff_time = ParseTimestamp(f[col[8]]);
      t.distance_km = ParseDouble(f[col[9]], "distance_km");
      t.cost = ParseDouble(f[col[10]], "cost");
      if (request_col && !Trim(f[*request_col]).empty()) {
        t.request_time = ParseTimestamp(f[*request_col]);
      }
    } catch (const InputError& e) {
      result.rejections.push_back({line, e.what()});
      continue;
    }
    std::string reason;
    if (t.dropoff_time <= t.pickup_time) {
      reason = "non-positive duration";
    } else if (!(t.distance_km > 0.0)) {
      reason = "non-positive distance";
    } else if (t.cost < 0.0) {
      reason = "negative cost";
    } else if (t.request_time && *t.request_time > t.pickup_time) {
      reason = "request after pickup";
    } else if (schema.study_area && !schema.study_area->Contains(t.origin)) {
      reason = "origin outside study area";
    } else if (schema.study_area && !schema.study_area->Contains(t.destination)) {
      reason = "destination outside study area";
    }
    if (!reason.empty()) {
      result.rejections.push_back({line, reason});
      continue;
    }
    result.trips.push_back(std::move(t));
  }
  return result;
}

bool AnyRequestTime(const std::vector<TripRecord>& trips) {
  return std::any_of(trips.begin(), trips.end(),
                     [](const TripRecord& t) { return t.request_time.has_value(); });
}

std::vector<std::string> TripHeader(bool with_request) {
  std::vector<std::string> header(std::begin(kTripColumns), std::end(kTripColumns));
  if (with_request) header.emplace_back(kRequestTimeColumn);
  return header;
}

std::vector<std::string> TripFields(const TripRecord& t, bool with_request) {
  std::vector<std::string> row = {t.plate_id,
                                  FormatDouble(t.origin.lon),
                                  FormatDouble(t.origin.lat),
                                  t.pickup_label,
                                  FormatTimestamp(t.pickup_time),
                                  FormatDouble(t.destination.lon),
                                  FormatDouble(t.destination.lat),
                                  t.dropoff_label,
                                  FormatTimestamp(t.dropoff_time),
                                  FormatDouble(t.distance_km),
                                  FormatDouble(t.cost)};
  if (with_request) {
    row.push_back(t.request_time ? FormatTimestamp(*t.request_time) : "");
  }
  return row;
}

void WriteTrips(std::ostream& out, const std::vector<TripRecord>& trips) {
  const bool with_request = AnyRequestTime(trips);
  csv::WriteRecord(out, TripHeader(with_request));
  for (const auto& t : trips) csv::WriteRecord(out, TripFields(t, with_request));
}

void WriteRejections(std::ostream& out, const std::vector<Rejection>& rejections) {
  for (const auto& r : rejections) {
    out << json{{"row", r.row}, {"reason", r.reason}}.dump() << '\n';
  }
}

std::string_view IqrFieldName(IqrField f) {
  return f == IqrField::kTravelTime ? "travel_time" : "distance";
}

namespace {

std::string DateOf(int64_t day) {
  std::string s = FormatTimestamp(day * 1440);
  return s.substr(0, s.find(' '));
}

double FieldValue(const TripRecord& t, IqrField f) {
  return f == IqrField::kTravelTime ? t.DurationMin() : t.distance_km;
}

// Computes bounds over `members` and flags outliers in `removed`.
IqrFilterReport BoundsFor(const std::vector<TripRecord>& trips,
                          const std::vector<size_t>& members, IqrField field,
                          double k, std::vector<char>& removed) {
  std::vector<double> values;
  values.reserve(members.size());
  for (size_t i : members) values.push_back(FieldValue(trips[i], field));
  std::sort(values.begin(), values.end());
  IqrFilterReport r;
  r.field = field;
  r.q1 = QuantileSorted(values, 0.25);
  r.q3 = QuantileSorted(values, 0.75);
  r.iqr = r.q3 - r.q1;
  r.lower_bound = r.q1 - k * r.iqr;
  r.upper_bound = r.q3 + k * r.iqr;
  for (size_t i : members) {
    const double v = FieldValue(trips[i], field);
    if (v < r.lower_bound || v > r.upper_bound) {
      ++r.removed_count;
      removed[i] = 1;
    }
  }
  return r;
}

}  // namespace

IqrFilterResult IqrFilter(const std::vector<TripRecord>& trips, double k,
                          bool per_day) {
  if (!(k >= 0.0)) throw ConfigError("IQR multiplier must be non-negative");
  if (trips.size() < 4) throw InputError("population too small for quartiles");

  std::map<int64_t, std::vector<size_t>> groups;
  for (size_t i = 0; i < trips.size(); ++i) {
    groups[per_day ? DayIndex(trips[i].pickup_time) : 0].push_back(i);
  }
  IqrFilterResult result;
  std::vector<char> removed(trips.size(), 0);
  for (const auto& [day, members] : groups) {
    if (members.size() < 4) {
      throw InputError("population too small for quartiles on day " +
                       DateOf(day));
    }
    for (IqrField field : {IqrField::kTravelTime, IqrField::kDistance}) {
      IqrFilterReport r = BoundsFor(trips, members, field, k, removed);
      if (per_day) r.day = day;
      result.reports.push_back(r);
    }
  }
  for (size_t i = 0; i < trips.size(); ++i) {
    if (removed[i]) {
      result.removed_indices.push_back(i);
    } else {
      result.kept.push_back(trips[i]);
    }
  }
  return result;
}

std::string IqrReportsToJson(const std::vector<IqrFilterReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json j = {{"field", IqrFieldName(r.field)},
              {"q1", r.q1},
              {"q3", r.q3},
              {"iqr", r.iqr},
              {"lower_bound", r.lower_bound},
              {"upper_bound", r.upper_bound},
              {"removed_count", r.removed_count}};
    if (r.day) j["day"] = DateOf(*r.day);
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

}  // namespace tncpt
