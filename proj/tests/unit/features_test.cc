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


#include "tncpt/features.h"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"

namespace tncpt {
namespace {

using testing::Offset;

// One station of each category around `c`.
TransitNetwork FourCategoryNetwork(const GeoPoint& c, bool with_metro_hub = true) {
  std::vector<Station> st = {
      {"M1", "Metro One", {}, c, Mode::kMetro, {"L1"}},
      {"M2", "Metro Two", {}, Offset(c, 2.0, 0.0), Mode::kMetro, {"L1"}},
      {"B1", "Bus One", {}, Offset(c, 0.0, 2.0), Mode::kBus, {"B1"}},
      {"B2", "Bus Two", {}, Offset(c, 0.0, -2.0), Mode::kBus, {"B1", "B2"}},
  };
  if (with_metro_hub) st[1].line_ids = {"L1", "L2"};
  std::vector<Route> routes = {
      {"R1", "L1", Mode::kMetro, {"M1", "M2"}, 5, 330, 1410, 35},
      {"R2", "B1", Mode::kBus, {"B1", "B2"}, 10, 360, 1380, 18},
  };
  return TransitNetwork(st, routes, FareRules{});
}

TEST(NearestStationDistances, CoincidentCentroidIsZero) {
  const GeoPoint c{121.40, 31.20};
  HexGrid grid({121.38, 31.18, 121.42, 31.22}, 0.5);
  const auto net = FourCategoryNetwork(grid.cells()[0].center);
  const auto d = NearestStationDistances(grid, net);
  EXPECT_EQ(d[0][0], 0.0);
}

TEST(NearestStationDistances, MissingCategory) {
  HexGrid grid({121.38, 31.18, 121.42, 31.22}, 0.5);
  const auto net = FourCategoryNetwork({121.40, 31.20}, false);
  try {
    NearestStationDistances(grid, net);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("category empty"), std::string::npos);
  }
}

TEST(NearestStationDistances, MatchesExhaustiveScan) {
  Rng rng(5);
  const GeoPoint c{121.40, 31.20};
  std::vector<Station> st;
  for (int i = 0; i < 60; ++i) {
    Station s;
    s.id = "S" + std::to_string(i);
    s.name = s.id;
    s.location = Offset(c, rng.Uniform(-6, 6), rng.Uniform(-6, 6));
    s.mode = i % 2 ? Mode::kMetro : Mode::kBus;
    s.line_ids = i % 3 == 0 ? std::vector<std::string>{"A", "B"}
                            : std::vector<std::string>{"A"};
    st.push_back(s);
  }
  std::vector<Route> routes = {{"R", "A", Mode::kBus, {"S0", "S1"}, 5, 330, 1410, 20}};
  TransitNetwork net(st, routes, FareRules{});
  HexGrid grid({121.33, 31.14, 121.47, 31.26}, 0.6);
  const auto got = NearestStationDistances(grid, net, 3);
  for (size_t cell = 0; cell < grid.cells().size(); ++cell) {
    std::array<double, 4> best;
    best.fill(std::numeric_limits<double>::infinity());
    for (const auto& s : net.stations()) {
      const int k = (s.mode == Mode::kMetro ? 0 : 2) + (s.is_hub() ? 1 : 0);
      best[k] = std::min(best[k], HaversineKm(grid.cells()[cell].center, s.location));
    }
    EXPECT_EQ(got[cell], best) << cell;
  }
}

TEST(GraphMetrics, TriangleAndStar) {
  const auto tri = GraphMetrics({{0, 1}, {1, 2}, {2, 0}}, {0, 1, 2});
  EXPECT_EQ(tri.avg_clustering, 1.0);
  EXPECT_EQ(tri.avg_centrality, 2.0);
  const auto star = GraphMetrics({{0, 1}, {0, 2}, {0, 3}}, {0, 1, 2, 3});
  EXPECT_EQ(star.avg_clustering, 0.0);
  EXPECT_EQ(star.avg_centrality, 1.5);
  EXPECT_EQ(GraphMetrics({}, {}).avg_clustering, 0.0);
}

TEST(GraphMetrics, RandomGraphMatchesPairCount) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const size_t n = 10;
    bool adj[10][10] = {};
    std::vector<std::pair<size_t, size_t>> edges;
    for (size_t u = 0; u < n; ++u) {
      for (size_t v = u + 1; v < n; ++v) {
        if (rng.Uniform() < 0.35) {
          adj[u][v] = adj[v][u] = true;
          edges.push_back({u, v});
          if (rng.Uniform() < 0.2) edges.push_back({v, u});  // duplicate edge
        }
      }
    }
    std::vector<size_t> nodes(n);
    for (size_t i = 0; i < n; ++i) nodes[i] = i;
    double sum_c = 0.0, sum_k = 0.0;
    for (size_t v = 0; v < n; ++v) {
      std::vector<size_t> nb;
      for (size_t u = 0; u < n; ++u) {
        if (adj[v][u]) nb.push_back(u);
      }
      sum_k += static_cast<double>(nb.size());
      if (nb.size() < 2) continue;
      double e = 0;
      for (size_t a = 0; a < nb.size(); ++a) {
        for (size_t b = 0; b < nb.size(); ++b) e += adj[nb[a]][nb[b]];
      }
      // Ordered pairs count each neighbor edge twice.
      sum_c += e / (static_cast<double>(nb.size()) * (nb.size() - 1));
    }
    const auto m = GraphMetrics(edges, nodes);
    EXPECT_NEAR(m.avg_clustering, sum_c / n, 1e-12);
    EXPECT_NEAR(m.avg_centrality, sum_k / n, 1e-12);
  }
}

TEST(ClippedLength, InsideCrossingOutside) {
  HexGrid grid({121.38, 31.18, 121.42, 31.22}, 1.0);
  // Regular hexagon of side 1 centered at the origin.
  std::array<PlanePoint, 6> hex;
  for (int k = 0; k < 6; ++k) {
    hex[k] = {std::cos(std::numbers::pi / 3 * k), std::sin(std::numbers::pi / 3 * k)};
  }
  EXPECT_NEAR(ClippedLength({-0.2, 0}, {0.3, 0}, hex), 0.5, 1e-12);
  EXPECT_NEAR(ClippedLength({-5, 0}, {5, 0}, hex), 2.0, 1e-12);
  EXPECT_NEAR(ClippedLength({0, -5}, {0, 5}, hex), std::sqrt(3.0), 1e-12);
  EXPECT_EQ(ClippedLength({3, 3}, {4, 4}, hex), 0.0);
}

TEST(RoadMetrics, ClippedLengthsSumToSegmentLength) {
  const GeoPoint c{121.40, 31.20};
  HexGrid grid({121.36, 31.16, 121.44, 31.24}, 0.5);
  RoadGraph g;
  g.nodes = {Offset(c, -2.0, -1.3), Offset(c, 2.5, 1.7)};
  RoadEdge e;
  e.u = 0;
  e.v = 1;
  e.highway = true;
  e.shape = g.nodes;
  g.edges.push_back(e);
  const auto m = ComputeRoadMetrics(grid, g);
  double total = 0.0, highway = 0.0;
  for (const auto& r : m) {
    total += r.road_km;
    highway += r.highway_km;
  }
  const PlanePoint a = grid.Project(g.nodes[0]), b = grid.Project(g.nodes[1]);
  EXPECT_NEAR(total, std::hypot(b.x - a.x, b.y - a.y), 1e-9);
  EXPECT_NEAR(highway, total, 1e-12);
}

class BuildFeaturesTest : public ::testing::Test {
 protected:
  BuildFeaturesTest()
      : grid_({121.36, 31.16, 121.44, 31.24}, 1.0), net_(FourCategoryNetwork(c_)) {}

  // Every cell gets one 10 minute and one 20 minute trip.
  void AddTrips() {
    for (size_t i = 0; i < grid_.cells().size(); ++i) {
      const auto& p = grid_.cells()[i].center;
      if (!grid_.bbox().Contains(p)) continue;
      for (int m : {10, 20}) {
        auto t = testing::MakeTrip(1440 * 19240 + 600, m, 4.0, 10.0 + m);
        t.origin = t.destination = p;
        trips_.push_back(t);
        classes_.push_back(TripClass{});
      }
    }
  }

  FeatureMatrix Build(const FeatureInputs& in) {
    const auto stats = ComputeRatios(trips_, classes_, grid_, 1);
    return BuildFeatures(grid_, stats, trips_, classes_, net_, in, Target::kDsr);
  }

  size_t Col(const FeatureMatrix& m, std::string_view name) {
    for (size_t j = 0; j < m.names.size(); ++j) {
      if (m.names[j] == name) return j;
    }
    ADD_FAILURE() << "no column " << name;
    return 0;
  }

  GeoPoint c_{121.40, 31.20};
  HexGrid grid_;
  TransitNetwork net_;
  std::vector<TripRecord> trips_;
  std::vector<TripClass> classes_;
};

TEST_F(BuildFeaturesTest, TripAveragesAndAvailability) {
  AddTrips();
  const auto m = Build({});
  ASSERT_GT(m.x.rows, 0u);
  EXPECT_EQ(m.names.size(), 9u);  // no population, roads or POIs; no waits
  for (const auto& s : m.schema) {
    if (kFeatureSpecs[s.spec].name == "avg_wait_time") EXPECT_FALSE(s.available);
  }
  for (size_t i = 0; i < m.x.rows; ++i) {
    EXPECT_EQ(m.x(i, Col(m, "avg_travel_time")), 15.0);
    EXPECT_EQ(m.x(i, Col(m, "n_trips")), 2.0);
    EXPECT_EQ(m.x(i, Col(m, "avg_fare_per_km")), (20.0 / 4.0 + 30.0 / 4.0) / 2.0);
    EXPECT_EQ(m.y[i], 0.0);
  }
}

TEST_F(BuildFeaturesTest, UniformRasterDensity) {
  AddTrips();
  // 50 m raster at 1000 persons/km2 over the whole box.
  const double density = 1000.0, step = 0.05;
  std::vector<RasterCell> raster;
  const PlanePoint lo = grid_.Project({grid_.bbox().min_lon, grid_.bbox().min_lat});
  const PlanePoint hi = grid_.Project({grid_.bbox().max_lon, grid_.bbox().max_lat});
  for (double x = lo.x + step / 2; x < hi.x; x += step) {
    for (double y = lo.y + step / 2; y < hi.y; y += step) {
      raster.push_back({grid_.Unproject({x, y}), density * step * step});
    }
  }
  FeatureInputs in;
  in.population = raster;
  const auto m = Build(in);
  const size_t col = Col(m, "log_pop_density");
  size_t checked = 0;
  for (size_t i = 0; i < m.x.rows; ++i) {
    // Interior cells only: every corner inside the raster.
    const size_t cell = *grid_.Find(m.axial[i].first, m.axial[i].second);
    bool interior = true;
    for (const auto& p : grid_.Corners(cell)) interior = interior && grid_.bbox().Contains(p);
    if (!interior) continue;
    ++checked;
    EXPECT_NEAR(std::exp(m.x(i, col)) - 1.0, density, 0.02 * density) << m.cell_ids[i];
  }
  EXPECT_GT(checked, 10u);
}

TEST_F(BuildFeaturesTest, PoiCountedOnce) {
  AddTrips();
  FeatureInputs in;
  in.pois = std::vector<Poi>{};
  auto m = Build(in);
  const size_t col = Col(m, "retail_density");
  for (size_t i = 0; i < m.x.rows; ++i) EXPECT_EQ(m.x(i, col), 0.0);

  // A POI on the shared edge of two hexagons lands in exactly one.
  const size_t cell = *grid_.Locate(c_);
  const auto corners = grid_.Corners(cell);
  const GeoPoint edge_mid{(corners[0].lon + corners[1].lon) / 2,
                          (corners[0].lat + corners[1].lat) / 2};
  in.pois = std::vector<Poi>{{edge_mid, "retail"}};
  m = Build(in);
  double total = 0.0;
  for (size_t i = 0; i < m.x.rows; ++i) total += m.x(i, col);
  EXPECT_NEAR(total * grid_.cell_area_km2(), 1.0, 1e-12);
}

TEST_F(BuildFeaturesTest, CsvRoundTrip) {
  AddTrips();
  const auto m = Build({});
  std::ostringstream out;
  WriteFeatureCsv(out, m);
  std::istringstream in(out.str());
  const auto back = ReadFeatureCsv(in);
  EXPECT_EQ(back.names, m.names);
  EXPECT_EQ(back.cell_ids, m.cell_ids);
  EXPECT_EQ(back.axial, m.axial);
  EXPECT_EQ(back.y, m.y);
  ASSERT_EQ(back.x.data.size(), m.x.data.size());
  for (size_t i = 0; i < m.x.data.size(); ++i) {
    EXPECT_NEAR(back.x.data[i], m.x.data[i], 1e-12 * (1 + std::abs(m.x.data[i])));
  }
}

// VIF_j is the j-th diagonal entry of the inverse correlation matrix.
std::vector<double> VifByInverseCorrelation(const Matrix& x) {
  const size_t n = x.rows, p = x.cols;
  std::vector<double> mean(p, 0.0), sd(p, 0.0);
  for (size_t j = 0; j < p; ++j) {
    for (size_t i = 0; i < n; ++i) mean[j] += x(i, j) / n;
    for (size_t i = 0; i < n; ++i) sd[j] += (x(i, j) - mean[j]) * (x(i, j) - mean[j]);
    sd[j] = std::sqrt(sd[j]);
  }
  // Augmented [R | I], Gauss-Jordan with partial pivoting.
  std::vector<std::vector<double>> a(p, std::vector<double>(2 * p, 0.0));
  for (size_t j = 0; j < p; ++j) {
    for (size_t k = 0; k < p; ++k) {
      double s = 0.0;
      for (size_t i = 0; i < n; ++i) s += (x(i, j) - mean[j]) * (x(i, k) - mean[k]);
      a[j][k] = s / (sd[j] * sd[k]);
    }
    a[j][p + j] = 1.0;
  }
  for (size_t c = 0; c < p; ++c) {
    size_t piv = c;
    for (size_t r = c + 1; r < p; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    const double d = a[c][c];
    for (auto& v : a[c]) v /= d;
    for (size_t r = 0; r < p; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      for (size_t k = 0; k < 2 * p; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> vif(p);
  for (size_t j = 0; j < p; ++j) vif[j] = a[j][p + j];
  return vif;
}

TEST(Vif, RandomMatrixMatchesInverseCorrelation) {
  Rng rng(17);
  Matrix x(40, 5);
  for (size_t i = 0; i < x.rows; ++i) {
    const double z = rng.Normal();
    for (size_t j = 0; j < x.cols; ++j) x(i, j) = rng.Normal() + (j < 3 ? z : 0.0);
  }
  const auto got = ComputeVif(x);
  const auto want = VifByInverseCorrelation(x);
  for (size_t j = 0; j < x.cols; ++j) EXPECT_NEAR(got[j], want[j], 1e-9 * want[j]);
}

TEST(Vif, OrthogonalDesignIsOne) {
  // Full 2^4 factorial design: centered, mutually orthogonal columns.
  Matrix x(16, 4);
  for (size_t i = 0; i < 16; ++i) {
    for (size_t j = 0; j < 4; ++j) x(i, j) = (i >> j) & 1 ? 1.0 : -1.0;
  }
  const auto r = VifFilter(x, 10.0);
  EXPECT_EQ(r.retained, (std::vector<size_t>{0, 1, 2, 3}));
  for (double v : r.steps.back().vif) EXPECT_NEAR(v, 1.0, 1e-9);
}

TEST(Vif, CollinearColumnDropped) {
  Rng rng(2);
  Matrix x(30, 3);
  for (size_t i = 0; i < x.rows; ++i) {
    x(i, 0) = rng.Normal();
    x(i, 1) = rng.Normal();
    x(i, 2) = 2.0 * x(i, 0) - x(i, 1);
  }
  const auto vif = ComputeVif(x);
  for (double v : vif) EXPECT_TRUE(std::isinf(v));
  const auto r = VifFilter(x, 10.0);
  ASSERT_EQ(r.retained.size(), 2u);
  // Ties drop the highest index first.
  EXPECT_EQ(r.retained, (std::vector<size_t>{0, 1}));
}

TEST(Vif, Underdetermined) {
  EXPECT_THROW(VifFilter(Matrix(2, 3), 10.0), InputError);
}

TEST(Target, Parse) {
  EXPECT_EQ(ParseTarget("ASR"), Target::kAsr);
  EXPECT_THROW(ParseTarget("XYZ"), ConfigError);
  EXPECT_TRUE(IsDepartureTarget(Target::kFcr));
  EXPECT_FALSE(IsDepartureTarget(Target::kLcr));
}

}  // namespace
}  // namespace tncpt
