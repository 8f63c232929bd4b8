// Copyright 2026 The gcl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings for the gcl library.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "gcl/config.hpp"
#include "gcl/eval.hpp"
#include "gcl/replay.hpp"
#include "gcl/report.hpp"
#include "gcl/trainer.hpp"

namespace py = pybind11;

namespace {

using namespace gcl;

ExperimentConfig make_config(const std::map<std::string, std::string>& values) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : values) cfg.set(key, value);
  cfg.validate();
  return cfg;
}

std::string run(const std::map<std::string, std::string>& values) {
  const ExperimentConfig cfg = make_config(values);
  const ResolvedDataset data = resolve_dataset(cfg.dataset);
  ExperimentResult result;
  {
    py::gil_scoped_release release;
    result = run_experiment(data.graph, cfg.stream, cfg.train, MethodSpec::named(cfg.method),
                            cfg.seed_list(), cfg.threads);
  }
  return run_report(cfg, DatasetInfo::of(data), result).dump();
}

std::map<std::string, py::object> dataset_info(const std::string& spec) {
  const ResolvedDataset d = resolve_dataset(spec);
  const DatasetInfo info = DatasetInfo::of(d);
  return {{"name", py::str(info.name)},
          {"source", py::str(info.source)},
          {"num_nodes", py::int_(info.num_nodes)},
          {"num_edges", py::int_(info.num_edges)},
          {"num_features", py::int_(info.num_features)},
          {"num_classes", py::int_(info.num_classes)},
          {"mean_homophily", py::float_(mean_homophily(d.graph))},
          {"warnings", py::cast(d.warnings)}};
}

std::vector<GlobalId> select_buffer(const std::string& method, const Matrix& points,
                                    const std::vector<GlobalId>& ids, int quota, double r,
                                    std::uint64_t seed) {
  if (method == "cd") return select_buffer_cd(points, ids, quota, CoverageSpec{r});
  if (method == "mf") return select_buffer_mf(points, ids, quota);
  Rng rng = make_rng(seed, "sampler");
  if (method == "random") return select_buffer_random(ids, quota, rng);
  if (method == "clustering") return select_buffer_clustering(points, ids, quota, rng);
  throw ConfigError("unknown sampler '" + method + "' (cd, mf, random, clustering)");
}

}  // namespace

PYBIND11_MODULE(_gcl, m) {
  m.doc() = "Graph continual learning with coverage-based replay and structure refinement";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DatasetError>(m, "DatasetError", PyExc_OSError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("default_config", [] { return ExperimentConfig{}.values(); },
        "Every configuration key with its default value as text.");
  m.def("config_keys", &ExperimentConfig::keys);
  m.def("methods", &MethodSpec::known_names);
  m.def("validate_config", [](const std::map<std::string, std::string>& values) {
    return make_config(values).values();
  }, py::arg("values"), "Applies `values` over the defaults, validates and returns the result.");
  m.def("run", &run, py::arg("values"), "Runs an experiment and returns the JSON report text.");
  m.def("dataset_info", &dataset_info, py::arg("spec"));

  m.def("pm", [](const std::vector<std::vector<double>>& rows) { return pm(AccuracyMatrix::from_rows(rows)); },
        py::arg("rows"));
  m.def("fm", [](const std::vector<std::vector<double>>& rows) { return fm(AccuracyMatrix::from_rows(rows)); },
        py::arg("rows"));
  m.def("buff_div", &buff_div, py::arg("buffer_points"), py::arg("train_points"));
  m.def("corr_div", &corr_div, py::arg("correct_points"), py::arg("test_points"), py::arg("center"));
  m.def("dist_from_center", &dist_from_center, py::arg("buffer_points"), py::arg("train_points"));

  m.def("buffer_quota", &buffer_quota, py::arg("class_sizes"), py::arg("capacity"));
  m.def("select_buffer", &select_buffer, py::arg("method"), py::arg("points"), py::arg("ids"),
        py::arg("quota"), py::arg("r") = 0.3, py::arg("seed") = 0);
}
