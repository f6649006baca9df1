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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "condition_matrix.h"
#include "planner_oracle.h"
#include "scenario_fixture.h"
#include "shap_oracle.h"
#include "test_util.h"
#include "tncpt/boost.h"
#include "tncpt/config.h"
#include "tncpt/explain.h"
#include "tncpt/features.h"
#include "tncpt/pipeline.h"
#include "tncpt/sensitivity.h"

namespace tncpt {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Check(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double Variance(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / v.size();
}

Outcome EndToEnd() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = testing::Prepare(ScenarioSpec{});
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& truth = p->scenario.truth;
  size_t agree = 0;
  for (size_t i = 0; i < truth.size(); ++i) {
    agree += p->classes[i].label == truth[i].label &&
             p->classes[i].failed_condition == truth[i].violated;
  }
  std::ostringstream d;
  d << agree << "/" << truth.size() << " trips agree, " << secs << " s";
  o.detail = d.str();
  o.pass = agree == truth.size() && !truth.empty() && secs < 10.0;
  return o;
}

Outcome Matrix20() {
  Outcome o;
  const TransitNetwork net = testing::MatrixNetwork();
  const LabelLexicon lex = StationLexicon(net);
  const auto cases = testing::ConditionMatrix();
  size_t ok = 0;
  for (const auto& c : cases) {
    const TripClass got = ClassifyTrip(c.trip, &c.alt, net, lex, ClassifierConfig{});
    if (got.label == c.label && got.failed_condition == c.failed) {
      ++ok;
    } else {
      o.Check(false, "case failed: " + c.name);
    }
  }
  o.Check(cases.size() == 20, "matrix does not have 20 cases");
  if (o.pass) o.detail = std::to_string(ok) + "/20 cases";
  return o;
}

Outcome Aggregation(const testing::PreparedScenario& p) {
  Outcome o;
  const auto& trips = p.scenario.trips;
  for (double side : {0.5, 1.0}) {
    const HexGrid grid(p.scenario.bbox, side);
    const int days = CountDays(trips);
    const GridStats stats = ComputeRatios(trips, p.classes, grid, days);
    o.Check(testing::SameCounts(stats, testing::BruteRecount(trips, p.classes, grid)),
            "cell counts differ from recount");
    size_t sum_o = 0, sum_a = 0;
    for (const auto& c : stats.cells) {
      sum_o += c.o;
      sum_a += c.a;
      if (c.o > 0) {
        o.Check(*c.Fcr() == static_cast<double>(c.fc) / c.o, "FCR is not FC/O");
        o.Check(*c.Dsr() == static_cast<double>(c.ds) / c.o, "DSR is not DS/O");
      }
      if (c.a > 0) {
        o.Check(*c.Lcr() == static_cast<double>(c.lc) / c.a, "LCR is not LC/A");
        o.Check(*c.Asr() == static_cast<double>(c.as) / c.a, "ASR is not AS/A");
      }
    }
    o.Check(sum_o + stats.off_grid_origins == trips.size(), "origin conservation");
    o.Check(sum_a + stats.off_grid_destinations == trips.size(), "destination conservation");
    o.Check(stats.off_grid_origins == 0 && stats.off_grid_destinations == 0,
            "trips fell off the grid");
  }
  if (o.pass) o.detail = "recount and conservation hold at 0.5 and 1.0 km";
  return o;
}

Outcome Boosting() {
  Outcome o;
  double worst = 0.0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(1000 + seed);
    Matrix x(200, 1);
    std::vector<double> y(200);
    for (size_t i = 0; i < 200; ++i) {
      x(i, 0) = rng.Uniform();
      y[i] = x(i, 0) < 0.5 ? 0.0 : 1.0;
    }
    // Analytic single-split fit: depth 1, stochastic regularizers off.
    BoostParams exact;
    exact.iterations = 300;
    exact.learning_rate = 0.1;
    exact.depth = 1;
    exact.min_data_in_leaf = 5;
    exact.bagging_temperature = 0.0;
    exact.random_strength = 0.0;
    exact.seed = seed;
    const double rel = Evaluate(Fit(x, y, exact).PredictAll(x), y).mse / Variance(y);
    worst = std::max(worst, rel);
    o.Check(rel < 1e-3, "step target MSE too large");
    // Loss and determinism with the default regularizers.
    BoostParams p = exact;
    p.bagging_temperature = BoostParams{}.bagging_temperature;
    p.random_strength = BoostParams{}.random_strength;
    for (const BoostParams& q : {exact, p}) {
      FitTrace trace;
      const BoostModel m = Fit(x, y, q, {}, &trace);
      o.Check(trace.train_mse.back() <= trace.train_mse.front(), "loss rose above baseline");
      o.Check(ModelToJson(m) == ModelToJson(Fit(x, y, q)), "re-fit is not identical");
    }
  }
  if (o.pass) {
    std::ostringstream d;
    d << "10 seeds, worst MSE/var " << worst;
    o.detail = d.str();
  }
  return o;
}

BoostParams ShapParams(uint64_t seed) {
  BoostParams p;
  p.iterations = 40;
  p.learning_rate = 0.1;
  p.depth = 4;
  p.min_data_in_leaf = 5;
  p.seed = seed;
  return p;
}

Outcome Shap() {
  Outcome o;
  double worst_local = 0.0, worst_oracle = 0.0;
  {
    const Matrix x = testing::RandomFeatures(50, 6, 31);
    const auto y = testing::SignalTarget(x, 99, 32);
    const BoostModel m = Fit(x, y, ShapParams(3));
    const Matrix bg = SampleBackground(x, 25, 3);
    for (ShapMode mode : {ShapMode::kExact, ShapMode::kTree}) {
      const auto s = ShapValues(m, x, bg, mode);
      for (size_t i = 0; i < x.rows; ++i) {
        double sum = s.base_value;
        for (size_t j = 0; j < s.values.cols; ++j) sum += s.values(i, j);
        const double pred = m.Predict(x.Row(i));
        worst_local = std::max(worst_local, std::abs(sum - pred) / std::max(1.0, std::abs(pred)));
      }
    }
  }
  o.Check(worst_local <= 1e-9, "local accuracy violated");
  {
    const Matrix x = testing::RandomFeatures(120, 5, 41);
    const auto y = testing::SignalTarget(x, 2, 42);
    const BoostModel m = testing::FitIgnoring(x, y, 2, ShapParams(4));
    const Matrix bg = SampleBackground(x, 25, 4);
    for (ShapMode mode : {ShapMode::kExact, ShapMode::kTree}) {
      const auto s = ShapValues(m, x, bg, mode);
      for (size_t i = 0; i < x.rows; ++i) o.Check(s.values(i, 2) == 0.0, "dummy feature nonzero");
    }
  }
  for (size_t p : {2, 5, 8}) {
    const Matrix x = testing::RandomFeatures(80, p, 50 + p);
    const auto y = testing::SignalTarget(x, 99, 60 + p);
    const BoostModel m = Fit(x, y, ShapParams(p));
    const Matrix bg = SampleBackground(x, 15, p);
    const auto exact = ShapValues(m, x, bg, ShapMode::kExact);
    const auto tree = ShapValues(m, x, bg, ShapMode::kTree);
    for (size_t i = 0; i < 10; ++i) {
      const auto phi = testing::BruteShapley(m, x.Row(i), bg);
      for (size_t j = 0; j < p; ++j) {
        worst_oracle = std::max({worst_oracle, std::abs(tree.values(i, j) - exact.values(i, j)),
                                 std::abs(tree.values(i, j) - phi[j])});
      }
    }
  }
  o.Check(worst_oracle <= 1e-6, "tree and exact values disagree");
  if (o.pass) {
    std::ostringstream d;
    d << "max local error " << worst_local << ", max tree/exact gap " << worst_oracle;
    o.detail = d.str();
  }
  return o;
}

Outcome Pdp() {
  Outcome o;
  double worst_var = 0.0, worst_gap = 0.0;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const Matrix x = testing::RandomFeatures(120, 4, seed);
    const auto y = testing::SignalTarget(x, 3, seed + 100);
    const BoostModel m = testing::FitIgnoring(x, y, 3, ShapParams(seed));
    worst_var = std::max(worst_var, Variance(PartialDependence(m, x, 3, 50).values));

    const Matrix x1 = testing::RandomFeatures(100, 1, seed + 200);
    const BoostModel m1 = Fit(x1, testing::SignalTarget(x1, 99, seed + 300), ShapParams(seed));
    const PdpCurve c = PartialDependence(m1, x1, 0, 100);
    for (size_t k = 0; k < c.grid.size(); ++k) {
      worst_gap = std::max(worst_gap, std::abs(c.values[k] - m1.Predict(&c.grid[k])));
    }
  }
  o.Check(worst_var < 1e-12, "PDP of an ignored feature is not flat");
  o.Check(worst_gap <= 1e-9, "single-feature PDP differs from the response");
  std::ostringstream d;
  d << "max variance " << worst_var << ", max gap " << worst_gap;
  if (o.pass) o.detail = d.str();
  return o;
}

Outcome Monotone(const testing::PreparedScenario& p) {
  Outcome o;
  const std::vector<std::pair<SweepParameter, std::vector<double>>> sweeps = {
      {SweepParameter::kWalkThreshold, {300, 400, 500, 600, 700, 800}},
      {SweepParameter::kTimeGate, {10, 15, 20, 25, 30, 35, 40}}};
  std::ostringstream d;
  for (const auto& [param, values] : sweeps) {
    const auto r = ElasticitySweep(p.scenario.trips, p.alts, *p.net, p.lexicon,
                                   ClassifierConfig{}, param, values);
    for (size_t i = 1; i < r.points.size(); ++i) {
      o.Check(r.points[i].substitutive_ratio >= r.points[i - 1].substitutive_ratio,
              std::string(SweepParameterName(param)) + " sweep decreases");
    }
    d << SweepParameterName(param) << " " << r.points.front().substitutive_ratio << ".."
      << r.points.back().substitutive_ratio << " ";
  }
  if (o.pass) o.detail = d.str();
  return o;
}

Outcome Vif() {
  Outcome o;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const size_t p = 2 + seed % 4;
    Matrix x(40, p + 1);
    for (size_t i = 0; i < x.rows; ++i) {
      double s = 0.0;
      for (size_t j = 0; j < p; ++j) {
        x(i, j) = rng.Normal();
        s += (1.0 + j) * x(i, j);
      }
      x(i, p) = s;
    }
    // Put the collinear column at a random position.
    const size_t pos = static_cast<size_t>(rng.UniformInt(0, static_cast<int64_t>(p)));
    std::vector<size_t> order(p + 1);
    std::iota(order.begin(), order.end(), 0);
    std::rotate(order.begin() + pos, order.end() - 1, order.end());
    const Matrix xs = SelectColumns(x, order);
    const auto r = VifFilter(xs, 10.0);
    o.Check(r.retained.size() <= p, "collinear column retained");
    for (double v : ComputeVif(SelectColumns(xs, r.retained))) {
      o.Check(std::isfinite(v) && v <= 10.0, "retained set still collinear");
    }
  }
  Matrix x(16, 4);
  for (size_t i = 0; i < 16; ++i) {
    for (size_t j = 0; j < 4; ++j) x(i, j) = (i >> j) & 1 ? 1.0 : -1.0;
  }
  for (double v : ComputeVif(x)) o.Check(std::abs(v - 1.0) <= 1e-9, "orthogonal VIF != 1");
  if (o.pass) o.detail = "20 collinear designs, 2^4 factorial";
  return o;
}

Outcome Planner100() {
  Outcome o;
  size_t ods = 0, reachable = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const auto c = testing::MakeRandomCase(seed);
    const PlannerConfig cfg;
    const Planner planner(c.net, cfg);
    testing::JourneyEnumerator oracle(c.net, cfg);
    for (const auto& [from, to] : c.ods) {
      const PtAlternative alt = planner.Plan(from, to);
      const double want = oracle.MinCost(from, to);
      ++ods;
      if (std::isinf(want)) {
        o.Check(!alt.available, "planner found a journey the oracle did not");
        continue;
      }
      ++reachable;
      o.Check(alt.available && alt.generalized_cost == want,
              "seed " + std::to_string(seed) + ": cost differs from exhaustive minimum");
    }
  }
  if (o.pass) {
    o.detail = std::to_string(ods) + " ODs, " + std::to_string(reachable) + " reachable";
  }
  return o;
}

// Every file under `root`, relative path -> bytes.
std::map<std::string, std::string> Snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = testing::Slurp(e.path());
  }
  return out;
}

void RunAll(const fs::path& dir) {
  RunSynth(ScenarioSpec{}, dir.string());
  for (const char* target : {"FCR", "LCR", "DSR", "ASR"}) {
    const RunConfig c = LoadConfig((dir / "config.yaml").string(),
                                   {std::string("features.target=") + target, "train.trials=4",
                                    "train.space.iterations=[50, 150]"});
    if (std::string(target) == "FCR") {
      RunIngest(c);
      RunPlan(c);
      RunClassify(c);
      RunGridify(c);
      RunElasticity(c);
    }
    RunFeatures(c);
    RunTrain(c, 7);
    RunExplain(c);
  }
  RunReport(LoadConfig((dir / "config.yaml").string()));
}

Outcome Reproducible() {
  Outcome o;
  const fs::path a = testing::TempDir("acceptance_run_a");
  const fs::path b = testing::TempDir("acceptance_run_b");
  RunAll(a);
  RunAll(b);
  const auto sa = Snapshot(a);
  const auto sb = Snapshot(b);
  o.Check(sa.size() == sb.size(), "file sets differ");
  size_t compared = 0;
  for (const auto& [name, bytes] : sa) {
    auto it = sb.find(name);
    o.Check(it != sb.end() && it->second == bytes, "differs: " + name);
    ++compared;
  }
  if (o.pass) o.detail = std::to_string(compared) + " files identical";
  return o;
}

int Main() {
  int failures = 0;
  const auto report = [&](int n, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("AC%d %s %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  report(1, EndToEnd);
  report(2, Matrix20);
  const auto prepared = testing::Prepare(ScenarioSpec{});
  report(3, [&] { return Aggregation(*prepared); });
  report(4, Boosting);
  report(5, Shap);
  report(6, Pdp);
  report(7, [&] { return Monotone(*prepared); });
  report(8, Vif);
  report(9, Planner100);
  report(10, Reproducible);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace tncpt

int main() { return tncpt::Main(); }
