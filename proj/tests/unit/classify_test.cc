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

#include <sstream>

#include <gtest/gtest.h>

#include "condition_matrix.h"
#include "test_util.h"

namespace tncpt {
namespace {

using testing::ConditionMatrix;
using testing::MatrixNetwork;

TEST(ClassifyTrip, ConditionMatrix) {
  const auto net = MatrixNetwork();
  const auto lex = StationLexicon(net);
  const auto cases = ConditionMatrix();
  ASSERT_EQ(cases.size(), 20u);
  for (const auto& c : cases) {
    const auto got = ClassifyTrip(c.trip, &c.alt, net, lex, ClassifierConfig{});
    EXPECT_EQ(got.label, c.label) << c.name;
    EXPECT_EQ(got.failed_condition, c.failed) << c.name;
  }
}

TEST(ClassifyTrip, BothEndsAtStations) {
  const auto net = MatrixNetwork();
  const auto lex = StationLexicon(net);
  auto t = testing::MakeTrip(1440 * 19240 + 600, 20);
  t.pickup_label = "Alpha";
  t.dropoff_label = "Beta Station Gate 2";
  t.destination = net.StationById("B").location;
  PtAlternative alt;
  const auto c = ClassifyTrip(t, &alt, net, lex, ClassifierConfig{});
  EXPECT_EQ(c.label, TripLabel::kFirstMile);
  EXPECT_TRUE(c.both_ends_station);
  EXPECT_EQ(c.matched_station, "B");
}

TEST(ClassifyTrip, FirstMileDoesNotNeedAlternative) {
  const auto net = MatrixNetwork();
  const auto lex = StationLexicon(net);
  auto t = testing::MakeTrip(1440 * 19240 + 600, 20);
  t.dropoff_label = "Anting Station Exit A";
  PtAlternative none;
  // Unknown station name: not a feeder, and no alternative means C3.
  EXPECT_EQ(ClassifyTrip(t, &none, net, lex, {}).failed_condition, Condition::kC3);
  t.dropoff_label = "Alpha Station Exit A";
  EXPECT_EQ(ClassifyTrip(t, &none, net, lex, {}).label, TripLabel::kFirstMile);
}

TEST(ClassifyTrip, TraceStopsAtDecidingCondition) {
  const auto net = MatrixNetwork();
  const auto lex = StationLexicon(net);
  for (const auto& c : ConditionMatrix()) {
    const auto got = ClassifyTrip(c.trip, &c.alt, net, lex, ClassifierConfig{});
    if (got.failed_condition) {
      const int k = static_cast<int>(*got.failed_condition);
      EXPECT_EQ(got.trace[k], false) << c.name;
      for (int i = k + 1; i < 6; ++i) EXPECT_FALSE(got.trace[i].has_value()) << c.name;
    }
  }
}

TEST(ClassifyTrip, NullAlternativeRejected) {
  const auto net = MatrixNetwork();
  const auto lex = StationLexicon(net);
  EXPECT_THROW(ClassifyTrip(testing::MakeTrip(0, 10), nullptr, net, lex, {}), InputError);
}

TEST(ClassifierConfig, Validate) {
  ClassifierConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.cost_ratio = 1.5;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.max_transfers = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.walk_threshold_m = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
}

TEST(ClassifyAll, SummaryAndRoundTrip) {
  const auto net = MatrixNetwork();
  const auto lex = StationLexicon(net);
  std::vector<TripRecord> trips;
  std::vector<PtAlternative> alts;
  for (const auto& c : ConditionMatrix()) {
    trips.push_back(c.trip);
    alts.push_back(c.alt);
  }
  const auto classes = ClassifyAll(trips, alts, net, lex, {}, 3);
  const auto summary = Summarize(classes);
  EXPECT_EQ(summary.total, 20u);
  size_t independent = 0;
  for (const auto& c : ConditionMatrix()) independent += c.label == TripLabel::kIndependent;
  EXPECT_EQ(summary.counts[static_cast<int>(TripLabel::kIndependent)], independent);
  EXPECT_EQ(summary.counts[static_cast<int>(TripLabel::kFirstMile)], 1u);
  EXPECT_EQ(summary.failed[static_cast<int>(Condition::kC3)], 3u);

  std::ostringstream out;
  WriteClassified(out, trips, classes);
  std::istringstream in(out.str());
  const auto back = ReadClassified(in);
  ASSERT_EQ(back.classes.size(), classes.size());
  for (size_t i = 0; i < classes.size(); ++i) {
    EXPECT_EQ(back.classes[i].label, classes[i].label);
    EXPECT_EQ(back.classes[i].failed_condition, classes[i].failed_condition);
    EXPECT_EQ(back.classes[i].matched_station, classes[i].matched_station);
  }
  std::vector<PtAlternative> short_alts(alts.begin(), alts.end() - 1);
  EXPECT_THROW(ClassifyAll(trips, short_alts, net, lex, {}), InputError);
}

TEST(TripLabel, NamesRoundTrip) {
  for (int i = 0; i < kNumTripLabels; ++i) {
    const auto l = static_cast<TripLabel>(i);
    EXPECT_EQ(ParseTripLabel(TripLabelName(l)), l);
  }
  EXPECT_THROW(ParseTripLabel("Other"), InputError);
  EXPECT_EQ(ParseCondition("C4"), Condition::kC4);
}

}  // namespace
}  // namespace tncpt
