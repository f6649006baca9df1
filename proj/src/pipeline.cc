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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tncpt/csv.h"
#include "tncpt/hexgrid.h"
#include "tncpt/svg.h"

namespace tncpt {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string Artifact(const RunConfig& c, const std::string& rel) {
  return (fs::path(c.workdir) / rel).string();
}

std::string TargetDir(const RunConfig& c, const char* stage) {
  return std::string(stage) + "/" + std::string(TargetName(c.features.target));
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, std::string_view content) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
  if (!out) throw InputError("write failed: " + path);
}

template <typename Fn>
void WriteWith(const std::string& path, Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  WriteFile(path, ss.str());
}

const std::string& RequireInput(const std::string& path, const char* key) {
  if (path.empty()) throw ConfigError("config: inputs." + std::string(key) + " is not set");
  if (!fs::exists(path)) {
    throw InputError("input not found: " + path + " (inputs." + key + ")");
  }
  return path;
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  return in;
}

TransitNetwork LoadNet(const RunConfig& c) {
  return LoadNetworkFiles(RequireInput(c.inputs.stations, "stations"),
                          RequireInput(c.inputs.routes, "routes"),
                          RequireInput(c.inputs.fares, "fares"));
}

std::vector<TripRecord> LoadCleanTrips(const RunConfig& c) {
  const std::string path = Artifact(c, "ingest/trips.csv");
  RequireArtifact(path, "ingest");
  auto in = OpenInput(path);
  ParseResult r = ParseTrips(in);
  if (!r.rejections.empty()) {
    throw InvariantError(path + ": cleaned trips failed to re-parse at line " +
                         std::to_string(r.rejections.front().row));
  }
  return std::move(r.trips);
}

// Identity of the planner inputs; a cache built under another identity is
// discarded.
ordered_json PlannerIdentity(const RunConfig& c) {
  ordered_json j;
  std::string net;
  for (const auto* p : {&c.inputs.stations, &c.inputs.routes, &c.inputs.fares}) {
    net += ReadFile(*p);
    net += '\0';
  }
  j["network_hash"] = HexU64(Fnv1a64(net));
  j["transfer_penalty_min"] = c.planner.transfer_penalty_min;
  j["search_radius_m"] = c.planner.search_radius_m;
  j["transfer_radius_m"] = c.planner.transfer_radius_m;
  return j;
}

std::vector<PtAlternative> LoadAlternatives(const RunConfig& c,
                                            const std::vector<TripRecord>& trips) {
  const std::string cache_path = Artifact(c, "plan/alternatives.jsonl");
  const std::string id_path = Artifact(c, "plan/planner.json");
  RequireArtifact(cache_path, "plan");
  RequireArtifact(id_path, "plan");
  if (ordered_json::parse(ReadFile(id_path)) != PlannerIdentity(c)) {
    throw InputError("stale artifact: " + id_path +
                     " was built for another network or planner config; rerun `tncpt plan`");
  }
  AlternativeCache cache;
  auto in = OpenInput(cache_path);
  cache.Load(in);
  std::vector<PtAlternative> alts;
  alts.reserve(trips.size());
  for (size_t i = 0; i < trips.size(); ++i) {
    auto a = cache.Find(trips[i].origin, trips[i].destination, HourOfDay(trips[i].pickup_time));
    if (!a) {
      throw InputError("missing artifact: no planned alternative for trip " +
                       std::to_string(i) + "; run `tncpt plan`");
    }
    alts.push_back(std::move(*a));
  }
  return alts;
}

ClassifiedTrips LoadClassified(const RunConfig& c) {
  const std::string path = Artifact(c, "classify/classified.csv");
  RequireArtifact(path, "classify");
  auto in = OpenInput(path);
  return ReadClassified(in);
}

BoundingBox TripBounds(const std::vector<TripRecord>& trips) {
  if (trips.empty()) throw InputError("no trips to grid");
  BoundingBox b{trips[0].origin.lon, trips[0].origin.lat, trips[0].origin.lon,
                trips[0].origin.lat};
  for (const auto& t : trips) {
    for (const auto& p : {t.origin, t.destination}) {
      b.min_lon = std::min(b.min_lon, p.lon);
      b.min_lat = std::min(b.min_lat, p.lat);
      b.max_lon = std::max(b.max_lon, p.lon);
      b.max_lat = std::max(b.max_lat, p.lat);
    }
  }
  if (b.IsDegenerate()) throw InputError("trip endpoints span a degenerate area");
  return b;
}

struct GridArtifact {
  BoundingBox bbox;
  double side_km = 0.5;
  int days = 1;
};

GridArtifact LoadGridArtifact(const RunConfig& c) {
  const std::string path = Artifact(c, "grid/grid.json");
  RequireArtifact(path, "gridify");
  const auto j = ordered_json::parse(ReadFile(path));
  const auto& b = j.at("bbox");
  return {{b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
           b.at(3).get<double>()},
          j.at("side_km").get<double>(),
          j.at("days").get<int>()};
}

FeatureInputs LoadFeatureInputs(const RunConfig& c) {
  FeatureInputs in;
  if (c.inputs.population) {
    auto f = OpenInput(RequireInput(*c.inputs.population, "population"));
    in.population = ReadPopulationCsv(f);
  }
  if (c.inputs.pois) {
    auto f = OpenInput(RequireInput(*c.inputs.pois, "pois"));
    in.pois = ReadPoisCsv(f);
  }
  if (c.inputs.roads) {
    auto f = OpenInput(RequireInput(*c.inputs.roads, "roads"));
    in.roads = ReadRoadsGeoJson(f);
  }
  return in;
}

FeatureMatrix LoadSelected(const RunConfig& c) {
  const std::string path = Artifact(c, TargetDir(c, "features") + "/selected.csv");
  RequireArtifact(path, "features");
  auto in = OpenInput(path);
  return ReadFeatureCsv(in);
}

ordered_json Parse(const std::string& text) { return ordered_json::parse(text); }

std::string FileSafe(std::string_view s) {
  std::string out;
  for (char ch : s) {
    out += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
  }
  return out;
}

// Hexagonal choropleth of one ratio; undefined cells are grey.
std::string RatioMapSvg(const HexGrid& grid, const GridStats& stats, Target target) {
  SvgDoc doc(800, 800);
  const PlanePoint lo = grid.Project({grid.bbox().min_lon, grid.bbox().min_lat});
  const PlanePoint hi = grid.Project({grid.bbox().max_lon, grid.bbox().max_lat});
  const double pad = grid.side_km();
  const double span = std::max(hi.x - lo.x, hi.y - lo.y) + 2 * pad;
  const LinearScale sx{lo.x - pad, lo.x - pad + span, 40, 760};
  const LinearScale sy{lo.y - pad, lo.y - pad + span, 760, 40};
  std::vector<std::optional<double>> vals;
  double vmax = 0;
  for (const auto& cs : stats.cells) {
    std::optional<double> v;
    switch (target) {
      case Target::kFcr: v = cs.Fcr(); break;
      case Target::kLcr: v = cs.Lcr(); break;
      case Target::kDsr: v = cs.Dsr(); break;
      case Target::kAsr: v = cs.Asr(); break;
    }
    if (v) vmax = std::max(vmax, *v);
    vals.push_back(v);
  }
  for (size_t i = 0; i < stats.cells.size(); ++i) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : grid.CornersXY(stats.cells[i].cell)) pts.push_back({sx(p.x), sy(p.y)});
    const auto& v = vals[i];
    doc.Polygon(pts, v ? RampColor(vmax > 0 ? *v / vmax : 0.0) : std::string("#dddddd"));
  }
  doc.Text(400, 24, std::string(TargetName(target)) + " (max " + FormatDouble(vmax) + ")",
           16, "middle");
  return doc.Str();
}

std::string TemporalSvg(const TemporalProfile& p) {
  SvgDoc doc(800, 600);
  const LinearScale sx{0, 23, 60, 760};
  auto ratio = [](size_t num, size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  const struct {
    const char* name;
    const char* color;
    std::function<double(int)> f;
  } series[] = {
      {"FCR", "#1f77b4", [&](int h) { return ratio(p.fc[h], p.departures[h]); }},
      {"LCR", "#ff7f0e", [&](int h) { return ratio(p.lc[h], p.arrivals[h]); }},
      {"DSR", "#2ca02c", [&](int h) { return ratio(p.ds[h], p.departures[h]); }},
      {"ASR", "#d62728", [&](int h) { return ratio(p.as[h], p.arrivals[h]); }}};
  double vmax = 0;
  for (const auto& s : series) {
    for (int h = 0; h < 24; ++h) vmax = std::max(vmax, s.f(h));
  }
  const LinearScale sy{0, vmax > 0 ? vmax : 1, 540, 60};
  doc.Line(60, 540, 760, 540, "#000000");
  doc.Line(60, 540, 60, 60, "#000000");
  for (int h = 0; h < 24; h += 3) doc.Text(sx(h), 560, std::to_string(h), 11, "middle");
  int row = 0;
  for (const auto& s : series) {
    std::vector<std::pair<double, double>> pts;
    for (int h = 0; h < 24; ++h) pts.push_back({sx(h), sy(s.f(h))});
    doc.Polyline(pts, s.color);
    doc.Rect(660, 70 + 18 * row, 12, 12, s.color);
    doc.Text(678, 80 + 18 * row, s.name, 12);
    ++row;
  }
  doc.Text(400, 590, "hour of day", 12, "middle");
  return doc.Str();
}

std::string ClassSharesSvg(const ClassSummary& s) {
  SvgDoc doc(800, 600);
  const LinearScale sy{0, 1, 540, 60};
  doc.Line(60, 540, 760, 540, "#000000");
  for (int k = 0; k < kNumTripLabels; ++k) {
    const double share = s.Share(static_cast<TripLabel>(k));
    const double x = 100 + 170 * k;
    doc.Rect(x, sy(share), 110, 540 - sy(share), "#4a78b5");
    doc.Text(x + 55, sy(share) - 6, FormatDouble(RoundTo(100 * share, 2)) + "%", 12, "middle");
    doc.Text(x + 55, 560, TripLabelName(static_cast<TripLabel>(k)), 11, "middle");
  }
  return doc.Str();
}

}  // namespace

void RequireArtifact(const std::string& path, std::string_view producer) {
  if (!fs::exists(path)) {
    throw InputError("missing artifact " + path + "; run `tncpt " + std::string(producer) +
                     "` first");
  }
}

std::string RunIngest(const RunConfig& c) {
  auto in = OpenInput(RequireInput(c.inputs.trips, "trips"));
  const ParseResult parsed = ParseTrips(in, c.ingest.schema);
  const IqrFilterResult iqr = IqrFilter(parsed.trips, c.ingest.iqr_k, c.ingest.per_day);
  WriteWith(Artifact(c, "ingest/trips.csv"), [&](std::ostream& o) { WriteTrips(o, iqr.kept); });
  WriteWith(Artifact(c, "ingest/rejections.jsonl"),
            [&](std::ostream& o) { WriteRejections(o, parsed.rejections); });
  ordered_json report;
  report["k"] = c.ingest.iqr_k;
  report["per_day"] = c.ingest.per_day;
  report["fields"] = Parse(IqrReportsToJson(iqr.reports));
  report["removed_indices"] = iqr.removed_indices;
  WriteFile(Artifact(c, "ingest/iqr.json"), report.dump(2) + "\n");

  ordered_json s;
  s["stage"] = "ingest";
  s["parsed"] = parsed.trips.size();
  s["rejected"] = parsed.rejections.size();
  s["removed_outliers"] = iqr.removed_indices.size();
  s["kept"] = iqr.kept.size();
  return s.dump(2);
}

std::string RunPlan(const RunConfig& c) {
  const TransitNetwork net = LoadNet(c);
  const std::vector<TripRecord> trips = LoadCleanTrips(c);
  const ordered_json identity = PlannerIdentity(c);
  const std::string cache_path = Artifact(c, "plan/alternatives.jsonl");
  const std::string id_path = Artifact(c, "plan/planner.json");
  AlternativeCache cache;
  if (fs::exists(cache_path) && fs::exists(id_path) &&
      ordered_json::parse(ReadFile(id_path)) == identity) {
    auto in = OpenInput(cache_path);
    cache.Load(in);
  }
  const Planner planner(net, c.planner);
  const auto alts = PlanAll(planner, trips, cache, c.jobs);
  WriteWith(cache_path, [&](std::ostream& o) { cache.Save(o); });
  WriteFile(id_path, identity.dump(2) + "\n");

  ordered_json s;
  s["stage"] = "plan";
  s["trips"] = trips.size();
  s["available"] = std::count_if(alts.begin(), alts.end(), [](const auto& a) { return a.available; });
  s["cache_entries"] = cache.size();
  return s.dump(2);
}

std::string RunClassify(const RunConfig& c) {
  const TransitNetwork net = LoadNet(c);
  const std::vector<TripRecord> trips = LoadCleanTrips(c);
  const auto alts = LoadAlternatives(c, trips);
  const LabelLexicon lexicon = StationLexicon(net);
  const auto classes = ClassifyAll(trips, alts, net, lexicon, c.classifier, c.jobs);
  WriteWith(Artifact(c, "classify/classified.csv"),
            [&](std::ostream& o) { WriteClassified(o, trips, classes); });
  const std::string summary = SummaryToJson(Summarize(classes));
  WriteFile(Artifact(c, "classify/summary.json"), summary + "\n");
  return summary;
}

std::string RunGridify(const RunConfig& c) {
  const ClassifiedTrips ct = LoadClassified(c);
  const TransitNetwork net = LoadNet(c);
  const BoundingBox bbox = c.grid.bbox ? *c.grid.bbox : TripBounds(ct.trips);
  const HexGrid grid(bbox, c.grid.side_km);
  const int days = CountDays(ct.trips);
  const GridStats stats = ComputeRatios(ct.trips, ct.classes, grid, days);

  ordered_json g;
  g["bbox"] = {bbox.min_lon, bbox.min_lat, bbox.max_lon, bbox.max_lat};
  g["side_km"] = c.grid.side_km;
  g["days"] = days;
  g["cells"] = grid.cells().size();
  g["cell_area_km2"] = grid.cell_area_km2();
  g["off_grid_origins"] = stats.off_grid_origins;
  g["off_grid_destinations"] = stats.off_grid_destinations;
  WriteFile(Artifact(c, "grid/grid.json"), g.dump(2) + "\n");
  WriteWith(Artifact(c, "grid/cells.csv"), [&](std::ostream& o) { WriteCellsCsv(o, grid, stats); });
  WriteWith(Artifact(c, "grid/cells.geojson"),
            [&](std::ostream& o) { WriteCellsGeoJson(o, grid, stats); });
  WriteWith(Artifact(c, "grid/temporal.csv"), [&](std::ostream& o) {
    WriteTemporalCsv(o, ComputeTemporalProfile(ct.trips, ct.classes));
  });

  std::vector<District> districts;
  if (c.inputs.districts) {
    auto in = OpenInput(RequireInput(*c.inputs.districts, "districts"));
    districts = ParseDistrictsGeoJson(in);
  }
  std::vector<OdFlow> flows;
  for (const char* f : {"all", "complementary", "Substitutive"}) {
    auto part = ComputeOdFlows(ct.trips, ct.classes, grid, districts, ParseClassFilter(f), days);
    flows.insert(flows.end(), part.begin(), part.end());
  }
  WriteWith(Artifact(c, "grid/od_flows.csv"), [&](std::ostream& o) { WriteOdFlowsCsv(o, flows); });
  WriteWith(Artifact(c, "grid/trip_stats.csv"), [&](std::ostream& o) {
    WriteTripStatsCsv(o, ComputeTripStats(ct.trips, ct.classes));
  });
  WriteWith(Artifact(c, "grid/breakdown.csv"), [&](std::ostream& o) {
    WriteBreakdownCsv(o, ComputeComplementaryBreakdown(ct.trips, ct.classes, net));
  });

  g["stage"] = "gridify";
  g["od_flow_rows"] = flows.size();
  return g.dump(2);
}

std::string RunFeatures(const RunConfig& c) {
  const GridArtifact ga = LoadGridArtifact(c);
  const ClassifiedTrips ct = LoadClassified(c);
  const TransitNetwork net = LoadNet(c);
  const HexGrid grid(ga.bbox, ga.side_km);
  const GridStats stats = ComputeRatios(ct.trips, ct.classes, grid, ga.days);
  const FeatureMatrix m = BuildFeatures(grid, stats, ct.trips, ct.classes, net,
                                        LoadFeatureInputs(c), c.features.target, c.jobs);
  const std::string dir = TargetDir(c, "features");
  WriteWith(Artifact(c, dir + "/features.csv"), [&](std::ostream& o) { WriteFeatureCsv(o, m); });
  WriteFile(Artifact(c, dir + "/schema.json"), FeatureSchemaJson(m) + "\n");

  FeatureMatrix sel = m;
  ordered_json vif;
  if (m.x.rows > m.x.cols) {
    const VifResult r = VifFilter(m.x, c.features.vif_threshold);
    vif = Parse(VifReportJson(r, m.names));
    sel.x = SelectColumns(m.x, r.retained);
    sel.names.clear();
    for (size_t j : r.retained) sel.names.push_back(m.names[j]);
  } else {
    vif["skipped"] = "underdetermined: " + std::to_string(m.x.rows) + " rows for " +
                     std::to_string(m.x.cols) + " columns";
  }
  vif["threshold"] = c.features.vif_threshold;
  WriteFile(Artifact(c, dir + "/vif.json"), vif.dump(2) + "\n");
  WriteWith(Artifact(c, dir + "/selected.csv"), [&](std::ostream& o) { WriteFeatureCsv(o, sel); });

  ordered_json s;
  s["stage"] = "features";
  s["target"] = TargetName(c.features.target);
  s["rows"] = m.x.rows;
  s["columns"] = m.names;
  s["selected"] = sel.names;
  return s.dump(2);
}

std::string RunTrain(const RunConfig& c, uint64_t seed) {
  const FeatureMatrix m = LoadSelected(c);
  if (m.x.cols == 0) throw InputError("no feature columns to train on");
  const std::vector<int> folds = SpatialKFold(m.axial, c.train.folds, seed);
  const std::string dir = TargetDir(c, "train");
  BoostParams params;
  ordered_json s;
  s["stage"] = "train";
  s["target"] = TargetName(m.target);
  s["rows"] = m.x.rows;
  if (c.train.params) {
    params = *c.train.params;
    s["search"] = nullptr;
  } else {
    const SearchResult search =
        RandomSearch(m.x, m.y, folds, c.train.space, c.train.trials, seed, c.jobs);
    WriteWith(Artifact(c, dir + "/trials.csv"), [&](std::ostream& o) { WriteTrialsCsv(o, search); });
    const Trial& best = search.trials[search.best];
    if (!std::isfinite(best.cv_mse)) {
      throw InputError("population too small: no trial could be trained on " +
                       std::to_string(m.x.rows) + " cells");
    }
    params = best.params;
    s["search"] = {{"trials", search.trials.size()}, {"best_trial", best.index},
                   {"best_cv_mse", best.cv_mse}};
  }
  const CvResult cv = CrossValidate(m.x, m.y, folds, params);
  const BoostModel model = Fit(m.x, m.y, params, m.names);
  WriteFile(Artifact(c, dir + "/model.json"), ModelToJson(model) + "\n");
  ordered_json cvj = Parse(CvReportJson(cv));
  cvj["folds_k"] = c.train.folds;
  cvj["seed"] = seed;
  WriteFile(Artifact(c, dir + "/cv.json"), cvj.dump(2) + "\n");
  WriteWith(Artifact(c, dir + "/folds.csv"), [&](std::ostream& o) {
    csv::WriteRecord(o, {"cell_id", "fold"});
    for (size_t i = 0; i < folds.size(); ++i) {
      csv::WriteRecord(o, {m.cell_ids[i], std::to_string(folds[i])});
    }
  });
  s["trees"] = model.trees.size();
  s["cv_r2"] = cv.pooled.r2;
  s["cv_rmse"] = cv.pooled.rmse;
  return s.dump(2);
}

std::string RunExplain(const RunConfig& c) {
  const std::string model_path = Artifact(c, TargetDir(c, "train") + "/model.json");
  RequireArtifact(model_path, "train");
  const BoostModel model = ModelFromJson(ReadFile(model_path));
  const FeatureMatrix m = LoadSelected(c);
  const Matrix x = SelectColumns(m.x, model.Remap(m.names));
  const Matrix bg = SampleBackground(x, std::min(c.explain.background, x.rows), c.seed);
  const ShapMatrix shap = ShapValues(model, x, bg, c.explain.mode, c.jobs);
  const ImportanceReport imp = Importance(shap);
  const std::string dir = TargetDir(c, "explain");

  WriteWith(Artifact(c, dir + "/shap.csv"), [&](std::ostream& o) {
    std::vector<std::string> header = {"cell_id", "prediction", "base_value"};
    header.insert(header.end(), shap.names.begin(), shap.names.end());
    csv::WriteRecord(o, header);
    for (size_t i = 0; i < shap.values.rows; ++i) {
      std::vector<std::string> row = {m.cell_ids[i], FormatDouble(shap.predictions[i]),
                                      FormatDouble(shap.base_value)};
      for (size_t j = 0; j < shap.values.cols; ++j) row.push_back(FormatDouble(shap.values(i, j)));
      csv::WriteRecord(o, row);
    }
  });
  WriteWith(Artifact(c, dir + "/importance.csv"), [&](std::ostream& o) { WriteImportanceCsv(o, imp); });
  WriteWith(Artifact(c, dir + "/beeswarm.csv"),
            [&](std::ostream& o) { WriteBeeswarmCsv(o, shap, imp, c.explain.top_k); });
  WriteFile(Artifact(c, dir + "/beeswarm.svg"), BeeswarmSvg(shap, imp, c.explain.top_k, c.seed));
  WriteFile(Artifact(c, dir + "/importance.svg"), ImportanceSvg(imp, c.explain.top_k));

  std::vector<PdpCurve> curves;
  const auto ranking = imp.Ranking();
  for (size_t r = 0; r < ranking.size() && r < c.explain.top_k; ++r) {
    curves.push_back(PartialDependence(model, x, ranking[r], c.explain.pdp_grid, c.jobs));
    WriteFile(Artifact(c, dir + "/pdp_" + FileSafe(curves.back().feature) + ".svg"),
              PdpSvg(curves.back()));
  }
  WriteWith(Artifact(c, dir + "/pdp.csv"), [&](std::ostream& o) { WritePdpCsv(o, curves); });

  ordered_json s;
  s["stage"] = "explain";
  s["target"] = TargetName(m.target);
  s["base_value"] = shap.base_value;
  ordered_json top = ordered_json::array();
  for (size_t r = 0; r < ranking.size() && r < c.explain.top_k; ++r) {
    top.push_back({{"feature", imp.names[ranking[r]]},
                   {"relative_importance_pct", imp.relative_pct[ranking[r]]}});
  }
  s["importance"] = std::move(top);
  return s.dump(2);
}

std::string RunElasticity(const RunConfig& c) {
  const TransitNetwork net = LoadNet(c);
  const std::vector<TripRecord> trips = LoadCleanTrips(c);
  const auto alts = LoadAlternatives(c, trips);
  const LabelLexicon lexicon = StationLexicon(net);
  std::vector<ElasticityReport> reports;
  for (const auto& [p, values] : c.elasticity) {
    reports.push_back(ElasticitySweep(trips, alts, net, lexicon, c.classifier, p, values, c.jobs));
  }
  WriteWith(Artifact(c, "elasticity/elasticity.csv"),
            [&](std::ostream& o) { WriteElasticityCsv(o, reports); });
  WriteFile(Artifact(c, "elasticity/elasticity.svg"), ElasticitySvg(reports));

  ordered_json s;
  s["stage"] = "elasticity";
  ordered_json list = ordered_json::array();
  for (const auto& r : reports) {
    double mean_abs = 0;
    int n = 0;
    for (const auto& pt : r.points) {
      if (pt.arc_elasticity) {
        mean_abs += std::abs(*pt.arc_elasticity);
        ++n;
      }
    }
    list.push_back({{"parameter", SweepParameterName(r.parameter)},
                    {"baseline", r.baseline},
                    {"baseline_ratio", r.baseline_ratio},
                    {"mean_abs_elasticity", n ? mean_abs / n : 0.0}});
  }
  s["sweeps"] = std::move(list);
  return s.dump(2);
}

std::string RunReport(const RunConfig& c) {
  const std::string summary_path = Artifact(c, "classify/summary.json");
  RequireArtifact(summary_path, "classify");
  const fs::path root(c.workdir);
  const fs::path out = root / "report";
  fs::remove_all(out);

  // Copy every chart and table produced so far.
  std::vector<fs::path> files;
  for (const char* stage : {"ingest", "classify", "grid", "features", "train", "explain",
                            "elasticity"}) {
    if (!fs::exists(root / stage)) continue;
    for (const auto& e : fs::recursive_directory_iterator(root / stage)) {
      if (!e.is_regular_file()) continue;
      const auto ext = e.path().extension().string();
      if (ext == ".svg" || ext == ".csv" || ext == ".json") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  ordered_json manifest = ordered_json::array();
  for (const auto& f : files) {
    const fs::path rel = fs::relative(f, root);
    if (rel.string() == "ingest/trips.csv" || rel.string() == "classify/classified.csv") continue;
    const std::string content = ReadFile(f.string());
    WriteFile((out / rel).string(), content);
    manifest.push_back({{"path", rel.generic_string()},
                        {"bytes", content.size()},
                        {"fnv1a64", HexU64(Fnv1a64(content))}});
  }

  const ClassifiedTrips ct = LoadClassified(c);
  const ClassSummary cs = Summarize(ct.classes);
  std::vector<std::pair<std::string, std::string>> charts;
  charts.push_back({"charts/class_shares.svg", ClassSharesSvg(cs)});
  charts.push_back({"charts/temporal.svg", TemporalSvg(ComputeTemporalProfile(ct.trips, ct.classes))});
  if (fs::exists(Artifact(c, "grid/grid.json"))) {
    const GridArtifact ga = LoadGridArtifact(c);
    const HexGrid grid(ga.bbox, ga.side_km);
    const GridStats stats = ComputeRatios(ct.trips, ct.classes, grid, ga.days);
    for (Target t : {Target::kFcr, Target::kLcr, Target::kDsr, Target::kAsr}) {
      std::string name(TargetName(t));
      std::transform(name.begin(), name.end(), name.begin(),
                     [](unsigned char ch) { return std::tolower(ch); });
      charts.push_back({"charts/map_" + name + ".svg", RatioMapSvg(grid, stats, t)});
    }
  }
  for (const auto& [rel, content] : charts) {
    WriteFile((out / rel).string(), content);
    manifest.push_back({{"path", rel}, {"bytes", content.size()},
                        {"fnv1a64", HexU64(Fnv1a64(content))}});
  }
  ordered_json doc;
  doc["summary"] = Parse(ReadFile(summary_path));
  doc["artifacts"] = manifest;
  WriteFile((out / "manifest.json").string(), doc.dump(2) + "\n");

  ordered_json s;
  s["stage"] = "report";
  s["artifacts"] = manifest.size();
  return s.dump(2);
}

std::string RunSynth(const ScenarioSpec& spec, const std::string& out_dir) {
  const Scenario scn = GenerateScenario(spec);
  WriteScenario(scn, out_dir);
  std::ostringstream cfg;
  cfg << "# Generated scenario; paths are relative to this file.\n"
      << "workdir: work\n"
      << "seed: " << spec.seed << "\n"
      << "inputs:\n"
      << "  trips: trips.csv\n"
      << "  stations: stations.csv\n"
      << "  routes: routes.csv\n"
      << "  fares: fares.txt\n";
  if (!scn.population.empty()) cfg << "  population: population.csv\n";
  if (!scn.pois.empty()) cfg << "  pois: pois.csv\n";
  if (!scn.roads_geojson.empty()) cfg << "  roads: roads.geojson\n";
  if (!scn.districts_geojson.empty()) cfg << "  districts: districts.geojson\n";
  cfg << "grid:\n  bbox: [" << FormatDouble(scn.bbox.min_lon) << ", "
      << FormatDouble(scn.bbox.min_lat) << ", " << FormatDouble(scn.bbox.max_lon) << ", "
      << FormatDouble(scn.bbox.max_lat) << "]\n";
  WriteFile((fs::path(out_dir) / "config.yaml").string(), cfg.str());

  ordered_json s;
  s["stage"] = "synth";
  s["trips"] = scn.trips.size();
  s["stations"] = scn.stations.size();
  s["routes"] = scn.routes.size();
  ordered_json counts;
  for (int k = 0; k < kNumTripLabels; ++k) {
    counts[std::string(TripLabelName(static_cast<TripLabel>(k)))] = std::count_if(
        scn.truth.begin(), scn.truth.end(),
        [&](const GroundTruth& g) { return g.label == static_cast<TripLabel>(k); });
  }
  s["planted"] = std::move(counts);
  return s.dump(2);
}

}  // namespace tncpt
