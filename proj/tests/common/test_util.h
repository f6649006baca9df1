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

// Shared fixtures for the unit and acceptance tests.

#ifndef TNCPT_TESTS_TEST_UTIL_H_
#define TNCPT_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "tncpt/common.h"
#include "tncpt/ingest.h"
#include "tncpt/ptnet.h"

namespace tncpt::testing {

// Offsets a point by (east, north) km on a local equirectangular plane.
inline GeoPoint Offset(const GeoPoint& p, double east_km, double north_km) {
  const double ky = kEarthRadiusKm * std::numbers::pi / 180.0;
  const double kx = ky * std::cos(p.lat * std::numbers::pi / 180.0);
  return {p.lon + east_km / kx, p.lat + north_km / ky};
}

// Independent type-7 quantile: h = (n-1)p, interpolate between order stats.
inline double Type7(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline TripRecord MakeTrip(Minutes start, double minutes, double km = 5.0,
                           double cost = 30.0) {
  TripRecord t;
  t.plate_id = "P1";
  t.origin = {121.40, 31.20};
  t.destination = {121.45, 31.22};
  t.pickup_label = "No. 1 Test Road";
  t.dropoff_label = "No. 2 Test Road";
  t.pickup_time = start;
  t.dropoff_time = start + static_cast<Minutes>(minutes);
  t.distance_km = km;
  t.cost = cost;
  return t;
}

inline std::filesystem::path TempDir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("tncpt_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tncpt::testing

#endif  // TNCPT_TESTS_TEST_UTIL_H_
