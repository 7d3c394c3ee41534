# Copyright 2026 The dpaudit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Record/replay and distributional audits of differentially private pipelines."""

import json

from dpaudit._core import (
    DpauditError,
    advanced_composition_epsilon,
    calibrate_gaussian_sigma,
    case_names,
    clopper_pearson_upper,
    epsilon_from_error_bounds,
    gaussian_delta,
    gaussian_pld_delta,
    laplace_epsilon,
    sample_laplace,
)
from dpaudit import _core

__all__ = [
    "DpauditError",
    "advanced_composition_epsilon",
    "calibrate_gaussian_sigma",
    "case_manifest",
    "case_names",
    "cli",
    "clopper_pearson_upper",
    "epsilon_from_error_bounds",
    "gaussian_delta",
    "gaussian_pld_delta",
    "laplace_epsilon",
    "run_case",
    "run_matrix",
    "sample_laplace",
]


def case_manifest():
  """Manifest entries for every corpus case, buggy and fixed."""
  return json.loads(_core.case_manifest_json())


def run_case(name, variant="buggy", seed=0, mode="full", strategy="",
             samples=100000, epsilon=None, delta=None):
  """Audits one corpus case and returns the report as a dict."""
  return json.loads(
      _core.run_case_json(name, variant, seed, mode, strategy, samples, epsilon,
                          delta))


def run_matrix(seed=0, samples=100000, record_replay_only=False,
               group="table2"):
  """Runs the detection matrix and returns it as a dict."""
  return json.loads(
      _core.run_matrix_json(seed, samples, record_replay_only, group))


def cli(args):
  """Runs the command-line front end; returns (exit_code, stdout, stderr)."""
  return _core.cli([str(a) for a in args])
