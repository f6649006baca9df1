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

// Python bindings: pipeline stages, scenario generation and the numeric
// kernels (planner, grid, boosting, SHAP, PDP, VIF). Errors surface as
// tncpt.InputError / ConfigError / InvariantError.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "tncpt/boost.h"
#include "tncpt/config.h"
#include "tncpt/explain.h"
#include "tncpt/features.h"
#include "tncpt/hexgrid.h"
#include "tncpt/label.h"
#include "tncpt/pipeline.h"
#include "tncpt/ptnet.h"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

tncpt::Matrix ToMatrix(const Array& a) {
  if (a.ndim() != 2) throw tncpt::InputError("expected a 2-D array");
  tncpt::Matrix m(a.shape(0), a.shape(1));
  std::copy(a.data(), a.data() + a.size(), m.data.begin());
  return m;
}

Array FromMatrix(const tncpt::Matrix& m) {
  Array out({m.rows, m.cols});
  std::copy(m.data.begin(), m.data.end(), out.mutable_data());
  return out;
}

std::vector<double> ToVector(const Array& a) {
  if (a.ndim() != 1) throw tncpt::InputError("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

// Owns the network so the planner's reference stays valid.
class PyPlanner {
 public:
  PyPlanner(const std::string& stations, const std::string& routes, const std::string& fares,
            double transfer_penalty_min, double search_radius_m, double transfer_radius_m)
      : net_(tncpt::LoadNetworkFiles(stations, routes, fares)),
        planner_(net_, {transfer_penalty_min, search_radius_m, transfer_radius_m}) {}

  std::string Plan(double olon, double olat, double dlon, double dlat) const {
    return tncpt::AlternativeToJson(planner_.Plan({olon, olat}, {dlon, dlat})).dump();
  }
  size_t num_stations() const { return net_.stations().size(); }

 private:
  tncpt::TransitNetwork net_;
  tncpt::Planner planner_;
};

std::string RunStage(const std::string& stage, const std::string& config,
                     const std::vector<std::string>& overrides, uint64_t seed) {
  const tncpt::RunConfig cfg = tncpt::LoadConfig(config, overrides);
  if (stage == "ingest") return tncpt::RunIngest(cfg);
  if (stage == "plan") return tncpt::RunPlan(cfg);
  if (stage == "classify") return tncpt::RunClassify(cfg);
  if (stage == "gridify") return tncpt::RunGridify(cfg);
  if (stage == "features") return tncpt::RunFeatures(cfg);
  if (stage == "train") return tncpt::RunTrain(cfg, seed);
  if (stage == "explain") return tncpt::RunExplain(cfg);
  if (stage == "elasticity") return tncpt::RunElasticity(cfg);
  if (stage == "report") return tncpt::RunReport(cfg);
  throw tncpt::ConfigError("unknown stage '" + stage + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "tncpt native core";

  // Later registrations are tried first, so the base class goes first.
  auto base = py::register_exception<tncpt::Error>(m, "Error");
  py::register_exception<tncpt::InputError>(m, "InputError", base);
  py::register_exception<tncpt::ConfigError>(m, "ConfigError", base);
  py::register_exception<tncpt::InvariantError>(m, "InvariantError", base);

  m.def("run_stage", &RunStage, py::arg("stage"), py::arg("config") = "",
        py::arg("overrides") = std::vector<std::string>{}, py::arg("seed") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "synth",
      [](const std::string& out_dir, uint64_t seed, const std::string& spec,
         const std::vector<std::string>& overrides, std::optional<double> fare_share) {
        tncpt::ScenarioSpec s = tncpt::LoadScenarioSpec(spec, overrides);
        s.seed = seed;
        if (fare_share) s.substitutive_fare_share = fare_share;
        return tncpt::RunSynth(s, out_dir);
      },
      py::arg("out_dir"), py::arg("seed") = 1, py::arg("spec") = "",
      py::arg("overrides") = std::vector<std::string>{}, py::arg("fare_share") = py::none(),
      py::call_guard<py::gil_scoped_release>());
  m.def("dump_config",
        [](const std::string& path, const std::vector<std::string>& overrides) {
          return tncpt::DumpConfig(tncpt::LoadConfig(path, overrides));
        },
        py::arg("path") = "", py::arg("overrides") = std::vector<std::string>{});

  m.def("normalize_label", [](const std::string& s) {
    const auto n = tncpt::NormalizeLabel(s);
    return py::make_tuple(n.key, n.suffix);
  });

  py::class_<PyPlanner>(m, "Planner")
      .def(py::init<const std::string&, const std::string&, const std::string&, double, double,
                    double>(),
           py::arg("stations"), py::arg("routes"), py::arg("fares"),
           py::arg("transfer_penalty_min") = 5.0, py::arg("search_radius_m") = 800.0,
           py::arg("transfer_radius_m") = 250.0)
      .def("plan_json", &PyPlanner::Plan, py::arg("olon"), py::arg("olat"), py::arg("dlon"),
           py::arg("dlat"))
      .def_property_readonly("num_stations", &PyPlanner::num_stations);

  py::class_<tncpt::HexGrid>(m, "HexGrid")
      .def(py::init([](double min_lon, double min_lat, double max_lon, double max_lat,
                       double side_km) {
             return tncpt::HexGrid({min_lon, min_lat, max_lon, max_lat}, side_km);
           }),
           py::arg("min_lon"), py::arg("min_lat"), py::arg("max_lon"), py::arg("max_lat"),
           py::arg("side_km") = 0.5)
      .def("locate", [](const tncpt::HexGrid& g, double lon, double lat) {
        return g.LocateId({lon, lat});
      })
      .def_property_readonly("num_cells", [](const tncpt::HexGrid& g) { return g.cells().size(); })
      .def_property_readonly("cell_area_km2", &tncpt::HexGrid::cell_area_km2);

  py::class_<tncpt::BoostModel>(m, "BoostModel")
      .def("predict",
           [](const tncpt::BoostModel& model, const Array& x) {
             const auto p = model.PredictAll(ToMatrix(x));
             return Array(p.size(), p.data());
           })
      .def_property_readonly("num_trees",
                             [](const tncpt::BoostModel& model) { return model.trees.size(); })
      .def_property_readonly("feature_names",
                             [](const tncpt::BoostModel& model) { return model.feature_names; })
      .def("to_json", [](const tncpt::BoostModel& model) { return tncpt::ModelToJson(model); })
      .def_static("from_json", &tncpt::ModelFromJson);

  m.def(
      "fit",
      [](const Array& x, const Array& y, int iterations, double learning_rate, int depth,
         double bagging_temperature, double random_strength, double column_sample_ratio,
         int min_data_in_leaf, uint64_t seed) {
        tncpt::BoostParams p;
        p.iterations = iterations;
        p.learning_rate = learning_rate;
        p.depth = depth;
        p.bagging_temperature = bagging_temperature;
        p.random_strength = random_strength;
        p.column_sample_ratio = column_sample_ratio;
        p.min_data_in_leaf = min_data_in_leaf;
        p.seed = seed;
        return tncpt::Fit(ToMatrix(x), ToVector(y), p);
      },
      py::arg("x"), py::arg("y"), py::arg("iterations") = 500, py::arg("learning_rate") = 0.03,
      py::arg("depth") = 6, py::arg("bagging_temperature") = 1.0,
      py::arg("random_strength") = 1.0, py::arg("column_sample_ratio") = 1.0,
      py::arg("min_data_in_leaf") = 10, py::arg("seed") = 0);

  m.def(
      "shap_values",
      [](const tncpt::BoostModel& model, const Array& x, const Array& background,
         const std::string& mode) {
        const auto s = tncpt::ShapValues(model, ToMatrix(x), ToMatrix(background),
                                         tncpt::ParseShapMode(mode), 1);
        return py::make_tuple(FromMatrix(s.values), s.base_value);
      },
      py::arg("model"), py::arg("x"), py::arg("background"), py::arg("mode") = "tree");

  m.def(
      "partial_dependence",
      [](const tncpt::BoostModel& model, const Array& x, size_t feature, int n_grid) {
        const auto c = tncpt::PartialDependence(model, ToMatrix(x), feature, n_grid, 1);
        return py::make_tuple(Array(c.grid.size(), c.grid.data()),
                              Array(c.values.size(), c.values.data()));
      },
      py::arg("model"), py::arg("x"), py::arg("feature"), py::arg("n_grid") = 100);

  m.def("vif", [](const Array& x) {
    const auto v = tncpt::ComputeVif(ToMatrix(x));
    return Array(v.size(), v.data());
  });
  m.def(
      "vif_filter",
      [](const Array& x, double threshold) { return tncpt::VifFilter(ToMatrix(x), threshold).retained; },
      py::arg("x"), py::arg("threshold") = 10.0);
}
