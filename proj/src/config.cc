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

#include "tncpt/config.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <limits>
#include <set>

#include <yaml-cpp/yaml.h>

extern char** environ;

namespace tncpt {

namespace {

namespace fs = std::filesystem;

void SetPath(YAML::Node node, const std::vector<std::string>& parts, size_t i,
             const YAML::Node& value) {
  if (i + 1 == parts.size()) {
    node[parts[i]] = value;
    return;
  }
  YAML::Node child = node[parts[i]];
  if (!child.IsMap()) {
    node[parts[i]] = YAML::Node(YAML::NodeType::Map);
    child = node[parts[i]];
  }
  SetPath(child, parts, i + 1, value);
}

void ApplyOverride(YAML::Node& root, const std::string& key, const std::string& value,
                   const std::string& origin) {
  std::vector<std::string> parts;
  for (auto& p : Split(key, '.')) {
    if (p.empty()) throw ConfigError(origin + ": malformed key '" + key + "'");
    parts.push_back(p);
  }
  YAML::Node v;
  try {
    v = YAML::Load(value);
  } catch (const YAML::Exception& e) {
    throw ConfigError(origin + ": cannot parse value for " + key + ": " + e.what());
  }
  if (!root.IsMap()) root = YAML::Node(YAML::NodeType::Map);
  SetPath(root, parts, 0, v);
}

// Strict reader over one mapping: every key must be consumed.
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      throw ConfigError("config: " + Where() + " must be a mapping");
    }
  }

  bool Has(const std::string& key) const {
    return node_ && node_.IsMap() && node_[key] && !node_[key].IsNull();
  }

  template <typename T>
  void Get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!Has(key)) return;
    try {
      out = node_[key].as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("config: invalid value for " + Name(key));
    }
  }

  template <typename T>
  void Get(const std::string& key, std::optional<T>& out) {
    seen_.insert(key);
    if (!Has(key)) return;
    T v{};
    Get(key, v);
    out = v;
  }

  Section Sub(const std::string& key) {
    seen_.insert(key);
    return Section(Has(key) ? node_[key] : YAML::Node(), Name(key));
  }

  std::optional<YAML::Node> Raw(const std::string& key) {
    seen_.insert(key);
    if (!Has(key)) return std::nullopt;
    return node_[key];
  }

  std::vector<std::string> Keys() const {
    std::vector<std::string> out;
    if (node_ && node_.IsMap()) {
      for (const auto& kv : node_) out.push_back(kv.first.as<std::string>());
    }
    return out;
  }

  void Done() const {
    for (const auto& k : Keys()) {
      if (!seen_.count(k)) throw ConfigError("config: unknown key " + Name(k));
    }
  }

  std::string Name(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  std::string Where() const { return path_.empty() ? "document" : path_; }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

BoundingBox ParseBbox(const YAML::Node& n, const std::string& name) {
  std::vector<double> v;
  try {
    v = n.as<std::vector<double>>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config: " + name + " must be [min_lon, min_lat, max_lon, max_lat]");
  }
  if (v.size() != 4) {
    throw ConfigError("config: " + name + " must be [min_lon, min_lat, max_lon, max_lat]");
  }
  BoundingBox b{v[0], v[1], v[2], v[3]};
  if (b.IsDegenerate()) throw ConfigError("config: " + name + " is degenerate");
  return b;
}

std::pair<double, double> ParseRange(Section& s, const std::string& key, double lo,
                                     double hi) {
  const auto n = s.Raw(key);
  if (!n) return {lo, hi};
  std::vector<double> v;
  try {
    v = n->as<std::vector<double>>();
  } catch (const YAML::Exception&) {
    v.clear();
  }
  if (v.size() != 2) throw ConfigError("config: " + s.Name(key) + " must be [min, max]");
  return {v[0], v[1]};
}

std::string Resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return p;
  const fs::path path(p);
  if (path.is_absolute()) return path.lexically_normal().string();
  return (base / path).lexically_normal().string();
}

void ReadBoostParams(Section s, BoostParams& p) {
  s.Get("iterations", p.iterations);
  s.Get("learning_rate", p.learning_rate);
  s.Get("depth", p.depth);
  s.Get("bagging_temperature", p.bagging_temperature);
  s.Get("random_strength", p.random_strength);
  s.Get("column_sample_ratio", p.column_sample_ratio);
  s.Get("min_data_in_leaf", p.min_data_in_leaf);
  s.Get("seed", p.seed);
  s.Get("ordered_segments", p.ordered_segments);
  s.Done();
}

YAML::Node ReadDocument(const std::string& path) {
  if (path.empty()) return YAML::Node(YAML::NodeType::Map);
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path);
  try {
    YAML::Node n = YAML::LoadFile(path);
    if (n.IsNull()) return YAML::Node(YAML::NodeType::Map);
    return n;
  } catch (const YAML::Exception& e) {
    throw ConfigError("config: cannot parse " + path + ": " + e.what());
  }
}

void ApplyFlagOverrides(YAML::Node& root, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const size_t eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--set expects key=value, got '" + o + "'");
    }
    ApplyOverride(root, o.substr(0, eq), o.substr(eq + 1), "--set");
  }
}

}  // namespace

std::map<std::string, std::string> ConfigEnvironment() {
  std::map<std::string, std::string> out;
  for (char** e = environ; e && *e; ++e) {
    const std::string_view kv(*e);
    if (kv.substr(0, 6) != "TNCPT_") continue;
    const size_t eq = kv.find('=');
    if (eq == std::string_view::npos) continue;
    out.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
  }
  return out;
}

RunConfig LoadConfig(const std::string& path, const std::vector<std::string>& overrides,
                     const std::map<std::string, std::string>& env) {
  YAML::Node root = ReadDocument(path);
  for (const auto& [name, value] : env) {
    if (name.rfind("TNCPT_", 0) != 0 || name.size() == 6) continue;
    std::string key;
    const std::string rest = name.substr(6);
    for (size_t i = 0; i < rest.size(); ++i) {
      if (rest.compare(i, 2, "__") == 0) {
        key += '.';
        ++i;
      } else {
        key += static_cast<char>(std::tolower(static_cast<unsigned char>(rest[i])));
      }
    }
    ApplyOverride(root, key, value, name);
  }
  ApplyFlagOverrides(root, overrides);

  const fs::path base = path.empty() ? fs::path(".") : fs::path(path).parent_path();
  RunConfig c;
  Section top(root, "");
  top.Get("workdir", c.workdir);
  c.workdir = Resolve(base.empty() ? "." : base, c.workdir);
  top.Get("jobs", c.jobs);
  top.Get("seed", c.seed);
  if (c.jobs < 0) throw ConfigError("config: jobs must be >= 0");

  {
    Section s = top.Sub("inputs");
    s.Get("trips", c.inputs.trips);
    s.Get("stations", c.inputs.stations);
    s.Get("routes", c.inputs.routes);
    s.Get("fares", c.inputs.fares);
    s.Get("population", c.inputs.population);
    s.Get("pois", c.inputs.pois);
    s.Get("roads", c.inputs.roads);
    s.Get("districts", c.inputs.districts);
    s.Done();
    const fs::path b = base.empty() ? fs::path(".") : base;
    for (auto* p : {&c.inputs.trips, &c.inputs.stations, &c.inputs.routes, &c.inputs.fares}) {
      *p = Resolve(b, *p);
    }
    for (auto* p : {&c.inputs.population, &c.inputs.pois, &c.inputs.roads,
                    &c.inputs.districts}) {
      if (*p) **p = Resolve(b, **p);
    }
  }
  {
    Section s = top.Sub("ingest");
    s.Get("iqr_k", c.ingest.iqr_k);
    s.Get("per_day", c.ingest.per_day);
    s.Get("column_map", c.ingest.schema.column_map);
    if (const auto n = s.Raw("study_area")) {
      c.ingest.schema.study_area = ParseBbox(*n, "ingest.study_area");
    }
    s.Done();
    if (!(c.ingest.iqr_k > 0)) throw ConfigError("config: ingest.iqr_k must be positive");
  }
  {
    Section s = top.Sub("planner");
    s.Get("transfer_penalty_min", c.planner.transfer_penalty_min);
    s.Get("search_radius_m", c.planner.search_radius_m);
    s.Get("transfer_radius_m", c.planner.transfer_radius_m);
    s.Done();
    if (!(c.planner.transfer_penalty_min >= 0) || !(c.planner.search_radius_m > 0) ||
        !(c.planner.transfer_radius_m >= 0)) {
      throw ConfigError("config: planner radii must be positive and the penalty non-negative");
    }
  }
  {
    Section s = top.Sub("classifier");
    s.Get("walk_threshold_m", c.classifier.walk_threshold_m);
    s.Get("time_gate_min", c.classifier.time_gate_min);
    s.Get("time_ratio", c.classifier.time_ratio);
    s.Get("max_transfers", c.classifier.max_transfers);
    s.Get("cost_ratio", c.classifier.cost_ratio);
    s.Done();
    c.classifier.Validate();
  }
  {
    Section s = top.Sub("grid");
    s.Get("side_km", c.grid.side_km);
    if (const auto n = s.Raw("bbox")) c.grid.bbox = ParseBbox(*n, "grid.bbox");
    s.Done();
    if (!(c.grid.side_km > 0)) throw ConfigError("config: grid.side_km must be positive");
  }
  {
    Section s = top.Sub("features");
    std::string target(TargetName(c.features.target));
    s.Get("target", target);
    c.features.target = ParseTarget(target);
    s.Get("vif_threshold", c.features.vif_threshold);
    s.Done();
    if (!(c.features.vif_threshold > 1)) {
      throw ConfigError("config: features.vif_threshold must exceed 1");
    }
  }
  {
    Section s = top.Sub("train");
    s.Get("folds", c.train.folds);
    s.Get("trials", c.train.trials);
    if (c.train.folds < 2) throw ConfigError("config: train.folds must be >= 2");
    if (c.train.trials < 1) throw ConfigError("config: train.trials must be >= 1");
    {
      Section sp = s.Sub("space");
      auto& v = c.train.space;
      std::tie(v.learning_rate_min, v.learning_rate_max) =
          ParseRange(sp, "learning_rate", v.learning_rate_min, v.learning_rate_max);
      std::tie(v.bagging_temperature_min, v.bagging_temperature_max) = ParseRange(
          sp, "bagging_temperature", v.bagging_temperature_min, v.bagging_temperature_max);
      std::tie(v.random_strength_min, v.random_strength_max) =
          ParseRange(sp, "random_strength", v.random_strength_min, v.random_strength_max);
      std::tie(v.column_sample_ratio_min, v.column_sample_ratio_max) = ParseRange(
          sp, "column_sample_ratio", v.column_sample_ratio_min, v.column_sample_ratio_max);
      auto int_range = [&](const std::string& key, int& lo, int& hi) {
        const auto [a, b] = ParseRange(sp, key, lo, hi);
        if (a != std::floor(a) || b != std::floor(b)) {
          throw ConfigError("config: train.space." + key + " bounds must be integers");
        }
        lo = static_cast<int>(a);
        hi = static_cast<int>(b);
      };
      int_range("iterations", v.iterations_min, v.iterations_max);
      int_range("depth", v.depth_min, v.depth_max);
      int_range("min_data_in_leaf", v.min_data_in_leaf_min, v.min_data_in_leaf_max);
      sp.Done();
      v.Validate();
    }
    if (s.Has("params")) {
      BoostParams p;
      ReadBoostParams(s.Sub("params"), p);
      p.Validate();
      c.train.params = p;
    } else {
      s.Raw("params");
    }
    s.Done();
  }
  {
    Section s = top.Sub("explain");
    std::string mode = c.explain.mode == ShapMode::kTree ? "tree" : "exact";
    s.Get("mode", mode);
    c.explain.mode = ParseShapMode(mode);
    s.Get("background", c.explain.background);
    s.Get("pdp_grid", c.explain.pdp_grid);
    s.Get("top_k", c.explain.top_k);
    s.Done();
    if (c.explain.background < 1) throw ConfigError("config: explain.background must be >= 1");
    if (c.explain.pdp_grid < 1) throw ConfigError("config: explain.pdp_grid must be >= 1");
    if (c.explain.top_k < 1) throw ConfigError("config: explain.top_k must be >= 1");
  }
  {
    Section s = top.Sub("elasticity");
    for (const auto& key : s.Keys()) {
      const SweepParameter p = ParseSweepParameter(key);
      std::vector<double> values;
      s.Get(key, values);
      for (double v : values) WithParameter(c.classifier, p, v);
      auto it = std::find_if(c.elasticity.begin(), c.elasticity.end(),
                             [&](const auto& e) { return e.first == p; });
      if (values.empty()) {
        c.elasticity.erase(it);
      } else {
        it->second = values;
      }
    }
    s.Done();
  }
  top.Done();
  return c;
}

std::string DumpConfig(const RunConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "workdir" << YAML::Value << c.workdir;
  out << YAML::Key << "jobs" << YAML::Value << c.jobs;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "inputs" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "trips" << YAML::Value << c.inputs.trips;
  out << YAML::Key << "stations" << YAML::Value << c.inputs.stations;
  out << YAML::Key << "routes" << YAML::Value << c.inputs.routes;
  out << YAML::Key << "fares" << YAML::Value << c.inputs.fares;
  const std::pair<const char*, const std::optional<std::string>*> opt[] = {
      {"population", &c.inputs.population},
      {"pois", &c.inputs.pois},
      {"roads", &c.inputs.roads},
      {"districts", &c.inputs.districts}};
  for (const auto& [k, v] : opt) {
    if (*v) out << YAML::Key << k << YAML::Value << **v;
  }
  out << YAML::EndMap;
  out << YAML::Key << "ingest" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "iqr_k" << YAML::Value << c.ingest.iqr_k;
  out << YAML::Key << "per_day" << YAML::Value << c.ingest.per_day;
  if (!c.ingest.schema.column_map.empty()) {
    out << YAML::Key << "column_map" << YAML::Value << c.ingest.schema.column_map;
  }
  if (const auto& a = c.ingest.schema.study_area) {
    out << YAML::Key << "study_area" << YAML::Value << YAML::Flow
        << std::vector<double>{a->min_lon, a->min_lat, a->max_lon, a->max_lat};
  }
  out << YAML::EndMap;
  out << YAML::Key << "planner" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "transfer_penalty_min" << YAML::Value << c.planner.transfer_penalty_min;
  out << YAML::Key << "search_radius_m" << YAML::Value << c.planner.search_radius_m;
  out << YAML::Key << "transfer_radius_m" << YAML::Value << c.planner.transfer_radius_m;
  out << YAML::EndMap;
  out << YAML::Key << "classifier" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "walk_threshold_m" << YAML::Value << c.classifier.walk_threshold_m;
  out << YAML::Key << "time_gate_min" << YAML::Value << c.classifier.time_gate_min;
  out << YAML::Key << "time_ratio" << YAML::Value << c.classifier.time_ratio;
  out << YAML::Key << "max_transfers" << YAML::Value << c.classifier.max_transfers;
  out << YAML::Key << "cost_ratio" << YAML::Value << c.classifier.cost_ratio;
  out << YAML::EndMap;
  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "side_km" << YAML::Value << c.grid.side_km;
  if (const auto& b = c.grid.bbox) {
    out << YAML::Key << "bbox" << YAML::Value << YAML::Flow
        << std::vector<double>{b->min_lon, b->min_lat, b->max_lon, b->max_lat};
  }
  out << YAML::EndMap;
  out << YAML::Key << "features" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "target" << YAML::Value << std::string(TargetName(c.features.target));
  out << YAML::Key << "vif_threshold" << YAML::Value << c.features.vif_threshold;
  out << YAML::EndMap;
  out << YAML::Key << "train" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "folds" << YAML::Value << c.train.folds;
  out << YAML::Key << "trials" << YAML::Value << c.train.trials;
  const auto& v = c.train.space;
  out << YAML::Key << "space" << YAML::Value << YAML::BeginMap;
  auto range = [&](const char* k, double lo, double hi) {
    out << YAML::Key << k << YAML::Value << YAML::Flow << std::vector<double>{lo, hi};
  };
  range("iterations", v.iterations_min, v.iterations_max);
  range("learning_rate", v.learning_rate_min, v.learning_rate_max);
  range("depth", v.depth_min, v.depth_max);
  range("bagging_temperature", v.bagging_temperature_min, v.bagging_temperature_max);
  range("random_strength", v.random_strength_min, v.random_strength_max);
  range("column_sample_ratio", v.column_sample_ratio_min, v.column_sample_ratio_max);
  range("min_data_in_leaf", v.min_data_in_leaf_min, v.min_data_in_leaf_max);
  out << YAML::EndMap;
  if (const auto& p = c.train.params) {
    out << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "iterations" << YAML::Value << p->iterations;
    out << YAML::Key << "learning_rate" << YAML::Value << p->learning_rate;
    out << YAML::Key << "depth" << YAML::Value << p->depth;
    out << YAML::Key << "bagging_temperature" << YAML::Value << p->bagging_temperature;
    out << YAML::Key << "random_strength" << YAML::Value << p->random_strength;
    out << YAML::Key << "column_sample_ratio" << YAML::Value << p->column_sample_ratio;
    out << YAML::Key << "min_data_in_leaf" << YAML::Value << p->min_data_in_leaf;
    out << YAML::Key << "seed" << YAML::Value << p->seed;
    out << YAML::Key << "ordered_segments" << YAML::Value << p->ordered_segments;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  out << YAML::Key << "explain" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value
      << (c.explain.mode == ShapMode::kTree ? "tree" : "exact");
  out << YAML::Key << "background" << YAML::Value << c.explain.background;
  out << YAML::Key << "pdp_grid" << YAML::Value << c.explain.pdp_grid;
  out << YAML::Key << "top_k" << YAML::Value << c.explain.top_k;
  out << YAML::EndMap;
  out << YAML::Key << "elasticity" << YAML::Value << YAML::BeginMap;
  for (const auto& [p, values] : c.elasticity) {
    out << YAML::Key << std::string(SweepParameterName(p)) << YAML::Value << YAML::Flow
        << values;
  }
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

ScenarioSpec LoadScenarioSpec(const std::string& path,
                              const std::vector<std::string>& overrides) {
  YAML::Node root = ReadDocument(path);
  ApplyFlagOverrides(root, overrides);
  ScenarioSpec spec;
  Section s(root, "");
  s.Get("seed", spec.seed);
  if (const auto n = s.Raw("center")) {
    std::vector<double> v;
    try {
      v = n->as<std::vector<double>>();
    } catch (const YAML::Exception&) {
    }
    if (v.size() != 2) throw ConfigError("synth: center must be [lon, lat]");
    spec.center = {v[0], v[1]};
  }
  s.Get("half_size_km", spec.half_size_km);
  s.Get("metro_lines", spec.metro_lines);
  s.Get("bus_routes", spec.bus_routes);
  s.Get("bus_chain", spec.bus_chain);
  s.Get("metro_headway_min", spec.metro_headway_min);
  s.Get("bus_headway_min", spec.bus_headway_min);
  s.Get("metro_speed_kmh", spec.metro_speed_kmh);
  s.Get("bus_speed_kmh", spec.bus_speed_kmh);
  {
    Section cs = s.Sub("counts");
    static constexpr const char* kKeys[] = {"first_mile", "last_mile", "substitutive",
                                            "c1", "c3", "c4", "c5", "c6"};
    for (int k = 0; k < kNumPlantedKinds; ++k) cs.Get(kKeys[k], spec.counts[k]);
    cs.Done();
  }
  s.Get("days", spec.days);
  s.Get("start_date", spec.start_date);
  if (const auto n = s.Raw("hour_weights")) {
    std::vector<double> v;
    try {
      v = n->as<std::vector<double>>();
    } catch (const YAML::Exception&) {
    }
    if (v.size() != 24) throw ConfigError("synth: hour_weights must list 24 values");
    std::copy(v.begin(), v.end(), spec.hour_weights.begin());
  }
  s.Get("with_request_time", spec.with_request_time);
  s.Get("substitutive_fare_share", spec.substitutive_fare_share);
  s.Get("auxiliary_layers", spec.auxiliary_layers);
  s.Done();
  return spec;
}

}  // namespace tncpt
