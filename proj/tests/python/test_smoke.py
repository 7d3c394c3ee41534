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

"""Smoke tests for the Python bindings."""

import json
import math
import statistics
import unittest

import dpaudit


class SmokeTest(unittest.TestCase):

  def test_manifest_lists_every_case(self):
    names = dpaudit.case_names()
    self.assertEqual(len(names), 10)
    manifest = dpaudit.case_manifest()
    self.assertEqual(len(manifest), 20)
    for entry in manifest:
      if entry["variant"] == "buggy":
        self.assertIsNotNone(entry["expected_violation"])
      else:
        self.assertIsNone(entry["expected_violation"])

  def test_scaled_count_report(self):
    buggy = dpaudit.run_case("scaled_count", "buggy", seed=7,
                             mode="record-replay")
    self.assertEqual(buggy["schema_version"], 1)
    self.assertEqual(buggy["verdict"], "fail")
    kinds = {v["kind"] for v in buggy["violations"]}
    self.assertIn("SensitivityViolation", kinds)
    fixed = dpaudit.run_case("scaled_count", "fixed", seed=7,
                             mode="distributional")
    self.assertEqual(fixed["verdict"], "pass")
    self.assertLessEqual(fixed["distributional"]["eps_hat"], 1.15)

  def test_matrix_matches(self):
    matrix = dpaudit.run_matrix()
    self.assertTrue(matrix["ok"])
    self.assertEqual(matrix["matched"], 18)

  def test_numerics(self):
    self.assertAlmostEqual(
        dpaudit.advanced_composition_epsilon(0.1, 0.0, 10, 1e-6),
        1.767429054344758, places=9)
    sigma = dpaudit.calibrate_gaussian_sigma(1.0, 1e-6, 1.0)
    self.assertLessEqual(dpaudit.gaussian_delta(1.0, sigma, 1.0), 1e-6 * 1.000001)
    exact = dpaudit.gaussian_delta(1.0, 1.0, 0.5)
    pld = dpaudit.gaussian_pld_delta(1.0, 1.0, 0.5)
    self.assertGreaterEqual(pld, exact - 1e-12)
    self.assertLessEqual(pld - exact, 1e-4)
    self.assertAlmostEqual(dpaudit.clopper_pearson_upper(0, 250, 0.05),
                           1 - 0.05**(1 / 250), places=12)
    self.assertAlmostEqual(dpaudit.epsilon_from_error_bounds(0.1, 0.2, 0.0),
                           math.log(8.0), places=12)

  def test_laplace_samples(self):
    xs = dpaudit.sample_laplace(0.0, 1.0, 1.0, 100000, 3)
    self.assertEqual(len(xs), 100000)
    self.assertTrue(1.9 <= statistics.variance(xs) <= 2.1)
    self.assertEqual(xs, dpaudit.sample_laplace(0.0, 1.0, 1.0, 100000, 3))

  def test_cli(self):
    code, out, _ = dpaudit.cli(["audit", "--pipeline", "scaled_count",
                                "--seed", 7, "--mode", "record-replay"])
    self.assertEqual(code, 1)
    self.assertEqual(json.loads(out)["verdict"], "fail")
    code, _, err = dpaudit.cli(["audit", "--pipeline", "nope", "--seed", 1])
    self.assertEqual(code, 2)
    self.assertIn("error", err)

  def test_errors_are_typed(self):
    with self.assertRaises(dpaudit.DpauditError):
      dpaudit.run_case("no_such_case")


if __name__ == "__main__":
  unittest.main()
