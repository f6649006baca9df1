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


#include "tncpt/hexgrid.h"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "scenario_fixture.h"
#include "test_util.h"

namespace tncpt {
namespace {

using testing::Offset;

const BoundingBox kBox{121.30, 31.10, 121.50, 31.30};

TEST(HexGrid, AreaAndCoverage) {
  HexGrid grid(kBox, 0.5);
  EXPECT_NEAR(grid.cell_area_km2(), 1.5 * std::sqrt(3.0) * 0.25, 1e-12);
  EXPECT_FALSE(grid.cells().empty());
  // Every cell overlaps the box: its center lies within one side of it.
  const double pad_lon = 0.5 / (kEarthRadiusKm * std::numbers::pi / 180.0 * std::cos(31.2 * std::numbers::pi / 180.0));
  const double pad_lat = 0.5 / (kEarthRadiusKm * std::numbers::pi / 180.0);
  for (const auto& c : grid.cells()) {
    EXPECT_GE(c.center.lon, kBox.min_lon - pad_lon);
    EXPECT_LE(c.center.lon, kBox.max_lon + pad_lon);
    EXPECT_GE(c.center.lat, kBox.min_lat - pad_lat);
    EXPECT_LE(c.center.lat, kBox.max_lat + pad_lat);
  }
}

TEST(HexGrid, LocateMatchesNearestCenter) {
  HexGrid grid(kBox, 0.5);
  Rng rng(11);
  for (int i = 0; i < 3000; ++i) {
    const GeoPoint p{rng.Uniform(kBox.min_lon, kBox.max_lon),
                     rng.Uniform(kBox.min_lat, kBox.max_lat)};
    const auto got = grid.Locate(p);
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(got, testing::NearestCell(grid, p));
  }
}

TEST(HexGrid, CentersLocateToThemselves) {
  HexGrid grid(kBox, 0.7);
  for (size_t i = 0; i < grid.cells().size(); ++i) {
    if (!kBox.Contains(grid.cells()[i].center)) continue;
    EXPECT_EQ(grid.Locate(grid.cells()[i].center), i);
  }
}

TEST(HexGrid, CornersAreOneSideFromCenter) {
  HexGrid grid(kBox, 0.5);
  const auto xy = grid.CornersXY(0);
  const PlanePoint c = grid.CenterOf(grid.cells()[0].q, grid.cells()[0].r);
  for (const auto& p : xy) EXPECT_NEAR(std::hypot(p.x - c.x, p.y - c.y), 0.5, 1e-12);
}

TEST(HexGrid, OutsideBoxIsOffGrid) {
  HexGrid grid(kBox, 0.5);
  EXPECT_FALSE(grid.Locate({121.60, 31.20}).has_value());
  EXPECT_EQ(grid.LocateId({121.60, 31.20}), kOffGrid);
}

TEST(HexGrid, InvalidArguments) {
  EXPECT_THROW(HexGrid(kBox, 0.0), ConfigError);
  EXPECT_THROW(HexGrid(BoundingBox{121.3, 31.1, 121.3, 31.3}, 0.5), InputError);
}

TEST(CountDays, DistinctPickupDays) {
  std::vector<TripRecord> trips = {testing::MakeTrip(1440 * 5 + 100, 10),
                                   testing::MakeTrip(1440 * 5 + 900, 10),
                                   testing::MakeTrip(1440 * 7 + 100, 10)};
  EXPECT_EQ(CountDays(trips), 2);
  EXPECT_EQ(CountDays({}), 1);
}

class ScenarioGrid : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { prepared_ = testing::Prepare(ScenarioSpec{}).release(); }
  static void TearDownTestSuite() {
    delete prepared_;
    prepared_ = nullptr;
  }
  static testing::PreparedScenario* prepared_;
};
testing::PreparedScenario* ScenarioGrid::prepared_ = nullptr;

TEST_F(ScenarioGrid, RatiosEqualBruteForceRecount) {
  const auto& s = prepared_->scenario;
  HexGrid grid(s.bbox, 0.5);
  const auto stats = ComputeRatios(s.trips, prepared_->classes, grid, CountDays(s.trips));
  EXPECT_TRUE(testing::SameCounts(stats, testing::BruteRecount(s.trips, prepared_->classes, grid)));
  size_t o = 0, a = 0;
  for (const auto& c : stats.cells) {
    o += c.o;
    a += c.a;
    if (c.o > 0) EXPECT_EQ(*c.Fcr(), static_cast<double>(c.fc) / c.o);
    if (c.o == 0) EXPECT_FALSE(c.Dsr().has_value());
  }
  EXPECT_EQ(o + stats.off_grid_origins, s.trips.size());
  EXPECT_EQ(a + stats.off_grid_destinations, s.trips.size());
  EXPECT_EQ(stats.off_grid_origins, 0u);
  EXPECT_EQ(stats.days, 3);
}

TEST_F(ScenarioGrid, TemporalProfileRecount) {
  const auto& s = prepared_->scenario;
  const auto p = ComputeTemporalProfile(s.trips, prepared_->classes);
  std::map<int, size_t> dep, ds;
  for (size_t i = 0; i < s.trips.size(); ++i) {
    const int h = static_cast<int>((s.trips[i].pickup_time % 1440) / 60);
    ++dep[h];
    ds[h] += prepared_->classes[i].label == TripLabel::kSubstitutive;
  }
  for (int h = 0; h < 24; ++h) {
    EXPECT_EQ(p.departures[h], dep[h]) << h;
    EXPECT_EQ(p.ds[h], ds[h]) << h;
  }
  size_t arrivals = 0;
  for (size_t v : p.arrivals) arrivals += v;
  EXPECT_EQ(arrivals, s.trips.size());
}

TEST_F(ScenarioGrid, TemporalFollowsPlantedHours) {
  // Night trips (C1 violations) are the only departures before 06:00.
  const auto& s = prepared_->scenario;
  const auto p = ComputeTemporalProfile(s.trips, prepared_->classes);
  size_t night = 0;
  for (int h = 0; h < 6; ++h) night += p.departures[h];
  EXPECT_EQ(night, static_cast<size_t>(ScenarioSpec{}.counts[3]));
  for (int h = 22; h < 24; ++h) EXPECT_EQ(p.departures[h], 0u);
}

TEST_F(ScenarioGrid, OdFlowsConserveCounts) {
  const auto& s = prepared_->scenario;
  HexGrid grid(s.bbox, 1.0);
  std::istringstream din(s.districts_geojson);
  const auto districts = ParseDistrictsGeoJson(din);
  ASSERT_EQ(districts.size(), 4u);
  const auto flows = ComputeOdFlows(s.trips, prepared_->classes, grid, districts,
                                    ParseClassFilter("all"), 3);
  size_t grid_total = 0, district_total = 0;
  for (const auto& f : flows) {
    (f.level == FlowLevel::kGrid ? grid_total : district_total) += f.count;
    EXPECT_EQ(f.flow, static_cast<double>(f.count) / 3);
  }
  EXPECT_EQ(grid_total, s.trips.size());
  EXPECT_EQ(district_total, s.trips.size());

  const auto sub = ComputeOdFlows(s.trips, prepared_->classes, grid, {},
                                  ParseClassFilter("Substitutive"), 3);
  size_t n_sub = 0;
  for (const auto& f : sub) n_sub += f.count;
  size_t expected = 0;
  for (const auto& c : prepared_->classes) expected += c.label == TripLabel::kSubstitutive;
  EXPECT_EQ(n_sub, expected);
  EXPECT_THROW(ParseClassFilter("nope"), ConfigError);
}

TEST_F(ScenarioGrid, TripStatsMeanTravelTime) {
  const auto& s = prepared_->scenario;
  const auto stats = ComputeTripStats(s.trips, prepared_->classes);
  EXPECT_TRUE(stats.has_wait);
  size_t total = 0;
  for (const auto& c : stats.by_class) {
    EXPECT_EQ(c.travel_min.Total(), c.count);
    total += c.count;
  }
  EXPECT_EQ(total, s.trips.size());
}

TEST_F(ScenarioGrid, BreakdownCoversComplementaryTrips) {
  const auto& s = prepared_->scenario;
  const auto b = ComputeComplementaryBreakdown(s.trips, prepared_->classes, *prepared_->net);
  size_t fm = 0, lm = 0;
  for (const auto& c : prepared_->classes) {
    fm += c.label == TripLabel::kFirstMile;
    lm += c.label == TripLabel::kLastMile;
  }
  EXPECT_EQ(b.totals[0], fm);
  EXPECT_EQ(b.totals[1], lm);
}

TEST(Histogram, ClampsIntoEndBins) {
  Histogram h{0.0, 5.0, std::vector<size_t>(4)};
  for (double v : {-1.0, 0.0, 4.99, 5.0, 19.0, 100.0}) h.Add(v);
  EXPECT_EQ(h.counts, (std::vector<size_t>{3, 1, 0, 2}));
  EXPECT_EQ(h.Total(), 6u);
}

TEST(TripStats, TwoTripsAverage) {
  auto a = testing::MakeTrip(1440 * 10 + 480, 10, 5.0, 20.0);
  auto b = testing::MakeTrip(1440 * 10 + 500, 20, 5.0, 30.0);
  TripClass c;
  const auto s = ComputeTripStats({a, b}, {c, c});
  const auto& ind = s.by_class[static_cast<int>(TripLabel::kIndependent)];
  EXPECT_EQ(ind.count, 2u);
  EXPECT_EQ(ind.travel_min.counts[2], 1u);  // [10, 15)
  EXPECT_EQ(ind.travel_min.counts[4], 1u);  // [20, 25)
  EXPECT_FALSE(s.has_wait);
}

TEST(PointInRing, Square) {
  const std::vector<GeoPoint> ring = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
  EXPECT_TRUE(PointInRing({0.5, 0.5}, ring));
  EXPECT_FALSE(PointInRing({1.5, 0.5}, ring));
}

TEST(Breakdown, DirectAndIndirect) {
  const GeoPoint a{121.40, 31.20};
  Station s1{"S1", "One", {}, a, Mode::kMetro, {"L1"}};
  Station s2{"S2", "Two", {}, Offset(a, 2.0, 0.0), Mode::kMetro, {"L1", "L2"}};
  Station s3{"S3", "Three", {}, Offset(a, 4.0, 0.0), Mode::kMetro, {"L1"}};
  Route r{"R", "L1", Mode::kMetro, {"S1", "S2", "S3"}, 5, 330, 1410, 35};
  TransitNetwork net({s1, s2, s3}, {r}, FareRules{});
  auto t = testing::MakeTrip(0, 10);
  t.origin = Offset(a, 0.1, 0.0);
  TripClass direct, hub, single;
  direct.label = hub.label = single.label = TripLabel::kFirstMile;
  direct.matched_station = "S1";
  hub.matched_station = "S2";
  single.matched_station = "S3";
  const auto b = ComputeComplementaryBreakdown({t, t, t}, {direct, hub, single}, net);
  EXPECT_EQ(b.counts[0][0][0], 1u);
  EXPECT_EQ(b.counts[0][0][1], 1u);
  EXPECT_EQ(b.counts[0][0][2], 1u);
  EXPECT_EQ(b.totals[0], 3u);
}

}  // namespace
}  // namespace tncpt
