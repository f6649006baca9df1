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


#include "tncpt/pipeline.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "test_util.h"

namespace tncpt {
namespace {

namespace fs = std::filesystem;

ScenarioSpec SmallSpec() {
  ScenarioSpec s;
  s.counts = {40, 40, 60, 20, 60, 40, 10, 40};
  s.days = 2;
  return s;
}

// Runs the CLI and returns (exit code, stdout, stderr).
struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult RunCli(const std::string& args, const fs::path& scratch) {
  const auto out = scratch / "cli_stdout.txt";
  const auto err = scratch / "cli_stderr.txt";
  const std::string cmd = std::string(TNCPT_CLI_PATH) + " " + args + " >" + out.string() +
                          " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = testing::Slurp(out);
  r.err = testing::Slurp(err);
  return r;
}

TEST(Pipeline, MissingArtifactNamesProducer) {
  const auto dir = testing::TempDir("pipe_missing");
  RunSynth(SmallSpec(), dir.string());
  const auto cfg = LoadConfig((dir / "config.yaml").string());
  try {
    RunReport(cfg);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("missing artifact"), std::string::npos);
  }
  RunIngest(cfg);
  try {
    RunClassify(cfg);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("tncpt plan"), std::string::npos) << e.what();
  }
}

TEST(Pipeline, SynthIngestPlanClassifyMatchesTruth) {
  const auto dir = testing::TempDir("pipe_truth");
  RunSynth(SmallSpec(), dir.string());
  const auto cfg = LoadConfig((dir / "config.yaml").string());
  RunIngest(cfg);
  RunPlan(cfg);
  const auto summary = nlohmann::json::parse(RunClassify(cfg));
  const auto& counts = SmallSpec().counts;
  EXPECT_EQ(summary["counts"]["FirstMileComplementary"], counts[0]);
  EXPECT_EQ(summary["counts"]["LastMileComplementary"], counts[1]);
  EXPECT_EQ(summary["counts"]["Substitutive"], counts[2]);
  EXPECT_EQ(summary["independent_by_condition"]["C1"], counts[3]);
  EXPECT_EQ(summary["independent_by_condition"]["C3"], counts[4]);
  EXPECT_EQ(summary["independent_by_condition"]["C6"], counts[7]);
}

TEST(Pipeline, TrainOnTinyPopulationFails) {
  const auto dir = testing::TempDir("pipe_tiny");
  ScenarioSpec spec = SmallSpec();
  spec.counts = {4, 4, 4, 1, 4, 4, 1, 4};
  RunSynth(spec, dir.string());
  // One huge cell holds every trip.
  auto cfg = LoadConfig((dir / "config.yaml").string(), {"grid.side_km=50"});
  RunIngest(cfg);
  RunPlan(cfg);
  RunClassify(cfg);
  RunGridify(cfg);
  RunFeatures(cfg);
  try {
    RunTrain(cfg, 1);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("population too small"), std::string::npos);
  }
}

TEST(Pipeline, StaleAlternativesRejected) {
  const auto dir = testing::TempDir("pipe_stale");
  RunSynth(SmallSpec(), dir.string());
  auto cfg = LoadConfig((dir / "config.yaml").string());
  RunIngest(cfg);
  RunPlan(cfg);
  cfg.planner.transfer_penalty_min = 7.0;
  EXPECT_THROW(RunClassify(cfg), InputError);
}

TEST(Cli, ExitCodesAndErrorJson) {
  const auto dir = testing::TempDir("cli_codes");
  auto r = RunCli("report -w " + (dir / "w").string(), dir);
  EXPECT_EQ(r.code, 2);
  const auto err = nlohmann::json::parse(r.err);
  EXPECT_EQ(err["error"]["kind"], "input");
  EXPECT_EQ(err["error"]["exit_code"], 2);
  EXPECT_NE(err["error"]["message"].get<std::string>().find("missing artifact"),
            std::string::npos);

  r = RunCli("train -w " + (dir / "w").string(), dir);  // --seed is mandatory
  EXPECT_EQ(r.code, 3);
  r = RunCli("ingest --set classifier.cost_ratio=5", dir);
  EXPECT_EQ(r.code, 3);
  r = RunCli("frobnicate", dir);
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, SynthThenIngestPrintsSummary) {
  const auto dir = testing::TempDir("cli_synth");
  auto r = RunCli("synth -o " + (dir / "s").string() + " --set counts.first_mile=5 "
                  "--set counts.last_mile=5 --set counts.substitutive=5 --set counts.c1=5 "
                  "--set counts.c3=5 --set counts.c4=5 --set counts.c5=5 --set counts.c6=5",
                  dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["trips"], 40);
  r = RunCli("ingest -c " + (dir / "s/config.yaml").string(), dir);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["kept"], 40);
}

}  // namespace
}  // namespace tncpt
