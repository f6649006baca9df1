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

// Command-line driver. Every subcommand prints a JSON summary on stdout; on
// failure a JSON error object goes to stderr and the exit code is 2 (input),
// 3 (config) or 4 (internal).

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tncpt/config.h"
#include "tncpt/pipeline.h"

namespace {

struct CommonOptions {
  std::string config;
  std::vector<std::string> set;
  std::optional<int> jobs;
  std::optional<std::string> workdir;
};

void AddCommon(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config, "YAML run configuration");
  cmd->add_option("--set", o.set, "Override a config key (section.key=value)");
  cmd->add_option("-j,--jobs", o.jobs, "Worker threads (0 = all cores)");
  cmd->add_option("-w,--workdir", o.workdir, "Output directory");
}

tncpt::RunConfig Resolve(const CommonOptions& o, std::vector<std::string> extra = {}) {
  std::vector<std::string> set = o.set;
  if (o.jobs) set.push_back("jobs=" + std::to_string(*o.jobs));
  set.insert(set.end(), extra.begin(), extra.end());
  tncpt::RunConfig cfg = tncpt::LoadConfig(o.config, set, tncpt::ConfigEnvironment());
  if (o.workdir) cfg.workdir = *o.workdir;
  return cfg;
}

int Fail(std::string_view kind, int code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"kind", kind}, {"exit_code", code}, {"message", message}};
  std::cerr << j.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ride-hailing and public-transit trip relationship analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tncpt 0.1.0");

  CommonOptions common;
  std::optional<std::string> target;
  uint64_t seed = 0;
  std::string synth_out;
  std::string synth_spec;
  std::optional<uint64_t> synth_seed;
  std::string synth_preset = "default";

  struct Stage {
    const char* name;
    const char* help;
  };
  const Stage stages[] = {
      {"ingest", "Parse trips, log rejections and drop IQR outliers"},
      {"plan", "Plan transit alternatives for every trip (cached)"},
      {"classify", "Label trips against the six conditions"},
      {"gridify", "Hexagonal ratios, temporal profiles, OD flows, trip statistics"},
      {"features", "Explanatory variables and VIF screening for one target"},
      {"train", "Spatial cross-validation, parameter search and final fit"},
      {"explain", "SHAP values, importance and partial dependence"},
      {"elasticity", "Threshold sweeps of the substitutive ratio"},
      {"report", "Bundle charts and tables into report/"}};
  std::vector<CLI::App*> cmds;
  for (const auto& s : stages) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    AddCommon(cmd, common);
    if (std::string_view(s.name) == "features" || std::string_view(s.name) == "train" ||
        std::string_view(s.name) == "explain") {
      cmd->add_option("-t,--target", target, "FCR, LCR, DSR or ASR");
    }
    if (std::string_view(s.name) == "train") {
      cmd->add_option("--seed", seed, "Seed for folds, search and fit")->required();
    }
    cmds.push_back(cmd);
  }
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic city and trips");
  synth->add_option("-o,--out", synth_out, "Output directory")->required();
  synth->add_option("--spec", synth_spec, "YAML scenario spec");
  synth->add_option("--seed", synth_seed, "Scenario seed");
  synth->add_option("--preset", synth_preset, "default or fare-share")
      ->check(CLI::IsMember({"default", "fare-share"}));
  synth->add_option("--set", common.set, "Override a spec key (key=value)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return Fail("config", 3, e.what());
  }

  try {
    std::string out;
    if (synth->parsed()) {
      tncpt::ScenarioSpec spec = tncpt::LoadScenarioSpec(synth_spec, common.set);
      if (synth_seed) spec.seed = *synth_seed;
      if (synth_preset == "fare-share") spec.substitutive_fare_share = 0.45;
      out = tncpt::RunSynth(spec, synth_out);
    } else {
      std::vector<std::string> extra;
      if (target) extra.push_back("features.target=" + *target);
      const tncpt::RunConfig cfg = Resolve(common, extra);
      const std::string name = app.get_subcommands().front()->get_name();
      if (name == "ingest") out = tncpt::RunIngest(cfg);
      else if (name == "plan") out = tncpt::RunPlan(cfg);
      else if (name == "classify") out = tncpt::RunClassify(cfg);
      else if (name == "gridify") out = tncpt::RunGridify(cfg);
      else if (name == "features") out = tncpt::RunFeatures(cfg);
      else if (name == "train") out = tncpt::RunTrain(cfg, seed);
      else if (name == "explain") out = tncpt::RunExplain(cfg);
      else if (name == "elasticity") out = tncpt::RunElasticity(cfg);
      else if (name == "report") out = tncpt::RunReport(cfg);
    }
    std::cout << out << std::endl;
    return 0;
  } catch (const tncpt::InputError& e) {
    return Fail("input", e.exit_code(), e.what());
  } catch (const tncpt::ConfigError& e) {
    return Fail("config", e.exit_code(), e.what());
  } catch (const tncpt::Error& e) {
    return Fail("internal", e.exit_code(), e.what());
  } catch (const std::exception& e) {
    return Fail("internal", 4, e.what());
  }
}
