// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings. Structured results cross the boundary as JSON text; the
// package wrapper decodes them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <tuple>
#include <string>
#include <vector>

#include "dpaudit/accountant.h"
#include "dpaudit/blackbox.h"
#include "dpaudit/cli.h"
#include "dpaudit/corpus.h"
#include "dpaudit/errors.h"
#include "dpaudit/mechanisms.h"
#include "dpaudit/rng.h"
#include "dpaudit/runner.h"
#include "dpaudit/stats.h"

namespace py = pybind11;

namespace dpaudit {
namespace {

std::string RunCaseJson(const std::string& name, const std::string& variant,
                        std::uint64_t seed, const std::string& mode,
                        const std::string& strategy, std::size_t samples,
                        std::optional<double> epsilon, std::optional<double> delta) {
  CaseRunOptions run;
  run.seed = seed;
  run.mode = ParseAuditMode(mode);
  run.strategy = strategy;
  run.samples = samples;
  run.epsilon = epsilon;
  run.delta = delta;
  py::gil_scoped_release release;
  return RunCase(MakeCase(name, ParseVariant(variant)), run).ToJson().dump();
}

std::string RunMatrixJson(std::uint64_t seed, std::size_t samples, bool record_replay_only,
                          const std::string& group) {
  MatrixOptions m;
  m.seed = seed;
  m.samples = samples;
  m.record_replay_only = record_replay_only;
  m.group = group;
  py::gil_scoped_release release;
  return RunMatrix(m).ToJson().dump();
}

std::string CaseManifestJson() {
  Value cases = Value::array();
  for (const PipelineCase& c : AllCases()) cases.push_back(c.Manifest());
  return cases.dump();
}

std::vector<double> SampleLaplace(double value, double epsilon, double sensitivity,
                                  std::size_t n, std::uint64_t seed) {
  const LaplaceMechanism lm;
  MechanismParams p;
  p.epsilon = epsilon;
  p.sensitivity = sensitivity;
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Generator g = Generator::Derive(seed, 0, i);
    const double q[1] = {value};
    out.push_back(lm.Run(q, p, g).front());
  }
  return out;
}

double LaplaceEpsilon(double sensitivity, double scale, double delta, double grid_step) {
  return AnalyticLaplacePld(sensitivity, scale, grid_step).EpsilonAt(delta);
}

double GaussianPldDelta(double sensitivity, double sigma, double epsilon, double grid_step) {
  return AnalyticGaussianPld(sensitivity, sigma, grid_step).DeltaAt(epsilon);
}

// (exit code, stdout text, stderr text)
std::tuple<int, std::string, std::string> Cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = RunCli(args, out, err);
  }
  return {code, out.str(), err.str()};
}

}  // namespace
}  // namespace dpaudit

PYBIND11_MODULE(_core, m) {
  using namespace dpaudit;
  m.doc() = "dpaudit core: record/replay and distributional privacy audits";

  py::register_exception<Error>(m, "DpauditError", PyExc_RuntimeError);

  m.def("case_names", [] { return CaseNames(); });
  m.def("case_manifest_json", &CaseManifestJson);
  m.def("run_case_json", &RunCaseJson, py::arg("name"), py::arg("variant") = "buggy",
        py::arg("seed") = 0, py::arg("mode") = "full", py::arg("strategy") = "",
        py::arg("samples") = kDefaultAuditSamples, py::arg("epsilon") = py::none(),
        py::arg("delta") = py::none());
  m.def("run_matrix_json", &RunMatrixJson, py::arg("seed") = 0,
        py::arg("samples") = kDefaultAuditSamples, py::arg("record_replay_only") = false,
        py::arg("group") = kDefaultGroup);
  m.def("sample_laplace", &SampleLaplace, py::arg("value"), py::arg("epsilon"),
        py::arg("sensitivity"), py::arg("n"), py::arg("seed"));
  m.def("laplace_epsilon", &LaplaceEpsilon, py::arg("sensitivity"), py::arg("scale"),
        py::arg("delta"), py::arg("grid_step") = kDefaultGridStep);
  m.def("gaussian_pld_delta", &GaussianPldDelta, py::arg("sensitivity"), py::arg("sigma"),
        py::arg("epsilon"), py::arg("grid_step") = kDefaultGridStep);
  m.def("gaussian_delta", &GaussianDelta, py::arg("sensitivity"), py::arg("sigma"),
        py::arg("epsilon"));
  m.def("calibrate_gaussian_sigma", &CalibrateGaussianSigma, py::arg("epsilon"),
        py::arg("delta"), py::arg("sensitivity"));
  m.def("advanced_composition_epsilon", &AdvancedCompositionEpsilon, py::arg("epsilon"),
        py::arg("delta_each"), py::arg("k"), py::arg("delta_slack"));
  m.def("clopper_pearson_upper", &ClopperPearsonUpper, py::arg("successes"),
        py::arg("trials"), py::arg("gamma"));
  m.def("epsilon_from_error_bounds", &EpsilonFromErrorBounds, py::arg("alpha_ub"),
        py::arg("beta_ub"), py::arg("delta"));
  m.def("cli", &Cli, py::arg("args"));
}
