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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "scenario_fixture.h"
#include "test_util.h"

namespace tncpt {
namespace {

ScenarioSpec SmallSpec() {
  ScenarioSpec s;
  s.counts = {10, 10, 10, 5, 10, 10, 5, 10};
  s.days = 1;
  return s;
}

TEST(Synth, PlantedClassesReproduced) {
  const auto p = testing::Prepare(ScenarioSpec{});
  const auto& s = p->scenario;
  EXPECT_EQ(s.trips.size(), 5000u);
  ASSERT_EQ(s.truth.size(), s.trips.size());
  for (size_t i = 0; i < s.trips.size(); ++i) {
    EXPECT_EQ(p->classes[i].label, s.truth[i].label) << i;
    EXPECT_EQ(p->classes[i].failed_condition, s.truth[i].violated) << i;
  }
  EXPECT_TRUE(std::is_sorted(s.trips.begin(), s.trips.end(),
                             [](const auto& a, const auto& b) {
                               return a.pickup_time < b.pickup_time;
                             }));
  // The IQR filter keeps every planted trip.
  EXPECT_TRUE(IqrFilter(s.trips).removed_indices.empty());
}

TEST(Synth, FeedersLabelStations) {
  const auto p = testing::Prepare(SmallSpec());
  const auto& s = p->scenario;
  size_t feeders = 0;
  for (size_t i = 0; i < s.trips.size(); ++i) {
    if (s.truth[i].label != TripLabel::kFirstMile) continue;
    ++feeders;
    const auto ids = p->lexicon.Match(s.trips[i].dropoff_label);
    ASSERT_TRUE(ids.has_value()) << s.trips[i].dropoff_label;
    // Within service hours on the matched station's routes.
    const int tod = static_cast<int>(s.trips[i].pickup_time % 1440);
    EXPECT_GE(tod, 6 * 60);
    EXPECT_LT(tod, 22 * 60);
  }
  EXPECT_EQ(feeders, 10u);
}

TEST(Synth, SubstituteMeetsEveryConditionByHand) {
  const auto p = testing::Prepare(SmallSpec());
  const auto& s = p->scenario;
  for (size_t i = 0; i < s.trips.size(); ++i) {
    if (s.truth[i].label != TripLabel::kSubstitutive) continue;
    const auto& t = s.trips[i];
    const auto& a = p->alts[i];
    ASSERT_TRUE(a.available);
    EXPECT_TRUE(IsInService(a, t.pickup_time, t.dropoff_time));
    EXPECT_FALSE(p->lexicon.Match(t.pickup_label).has_value());
    EXPECT_FALSE(p->lexicon.Match(t.dropoff_label).has_value());
    EXPECT_LE(a.access_walk_m, 400.0);
    EXPECT_LE(a.egress_walk_m, 400.0);
    const double tt = t.DurationMin();
    EXPECT_TRUE(tt <= 15 ? a.t_pt - tt <= 15 : a.t_pt <= 2 * tt);
    EXPECT_LE(a.transfers, 2);
    EXPECT_LE(a.fare, 0.5 * t.cost);
  }
}

TEST(Synth, SeedDeterminism) {
  const auto a = testing::TempDir("synth_a");
  const auto b = testing::TempDir("synth_b");
  WriteScenario(GenerateScenario(SmallSpec()), a.string());
  WriteScenario(GenerateScenario(SmallSpec()), b.string());
  size_t files = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++files;
    const auto rel = std::filesystem::relative(e.path(), a);
    EXPECT_EQ(testing::Slurp(e.path()), testing::Slurp(b / rel)) << rel;
  }
  EXPECT_EQ(files, 9u);
  ScenarioSpec other = SmallSpec();
  other.seed = 2;
  EXPECT_NE(GenerateScenario(other).trips, GenerateScenario(SmallSpec()).trips);
}

TEST(Synth, WrittenFilesLoadBack) {
  const auto dir = testing::TempDir("synth_load");
  const auto s = GenerateScenario(SmallSpec());
  WriteScenario(s, dir.string());
  const auto net = LoadNetworkFiles((dir / "stations.csv").string(),
                                    (dir / "routes.csv").string(),
                                    (dir / "fares.txt").string());
  EXPECT_EQ(net.stations().size(), s.stations.size());
  std::ifstream trips(dir / "trips.csv");
  const auto parsed = ParseTrips(trips);
  EXPECT_TRUE(parsed.rejections.empty());
  EXPECT_EQ(parsed.trips, s.trips);
  std::ifstream truth(dir / "ground_truth.csv");
  const auto gt = ReadGroundTruthCsv(truth);
  ASSERT_EQ(gt.size(), s.truth.size());
  for (size_t i = 0; i < gt.size(); ++i) {
    EXPECT_EQ(gt[i].label, s.truth[i].label);
    EXPECT_EQ(gt[i].violated, s.truth[i].violated);
  }
}

TEST(Synth, InfeasibleSpecs) {
  ScenarioSpec no_stations = SmallSpec();
  no_stations.metro_lines = 0;
  no_stations.bus_routes = false;
  no_stations.bus_chain = false;
  EXPECT_THROW(GenerateScenario(no_stations), ConfigError);
  ScenarioSpec no_chain = SmallSpec();
  no_chain.bus_chain = false;
  EXPECT_THROW(GenerateScenario(no_chain), ConfigError);  // C5 needs three transfers
  ScenarioSpec night = SmallSpec();
  night.hour_weights[2] = 1.0;
  EXPECT_THROW(GenerateScenario(night), ConfigError);
}

TEST(Synth, NetworkShape) {
  const auto s = GenerateScenario(SmallSpec());
  std::set<std::string> ids;
  size_t hubs = 0;
  for (const auto& st : s.stations) {
    ids.insert(st.id);
    hubs += st.is_hub();
  }
  EXPECT_EQ(ids.size(), s.stations.size());
  EXPECT_GT(hubs, 0u);
  for (const auto& t : s.trips) {
    EXPECT_TRUE(s.bbox.Contains(t.origin));
    EXPECT_TRUE(s.bbox.Contains(t.destination));
  }
}

}  // namespace
}  // namespace tncpt
