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

#include "doctest.h"

#include <cmath>
#include <vector>

#include "dpaudit/blackbox.h"
#include "dpaudit/errors.h"
#include "dpaudit/rng.h"
#include "dpaudit/stats.h"
#include "oracles.h"

namespace dpaudit {
namespace {

const TabularDataset kD0 = TabularDataset::FromValues({0.0});
const TabularDataset kD1 = TabularDataset::FromValues({1.0});

std::vector<double> Identity(const TabularDataset& d, std::uint64_t) {
  return {d.rows()[0][0]};
}

TEST_CASE("clopper-pearson upper bound matches the bisection oracle") {
  for (std::uint64_t n : {10u, 250u, 1000u}) {
    for (std::uint64_t k : {0u, 1u, 5u}) {
      CAPTURE(n);
      CAPTURE(k);
      CHECK(ClopperPearsonUpper(k, n, 0.05) ==
            doctest::Approx(oracle::ClopperPearsonUpper(k, n, 0.05)).epsilon(1e-9));
    }
  }
  // Zero failures have the closed form 1 - gamma^(1/n).
  CHECK(ClopperPearsonUpper(0, 250, 0.05) ==
        doctest::Approx(1.0 - std::pow(0.05, 1.0 / 250)).epsilon(1e-12));
  CHECK(ClopperPearsonUpper(250, 250, 0.05) == 1.0);
}

TEST_CASE("error bounds convert to an epsilon lower bound") {
  CHECK(EpsilonFromErrorBounds(0.5, 0.5, 0.0) == 0.0);
  CHECK(EpsilonFromErrorBounds(1.0, 1.0, 0.0) == 0.0);
  CHECK(EpsilonFromErrorBounds(0.1, 0.2, 0.0) == doctest::Approx(std::log(0.8 / 0.1)));
  CHECK(EpsilonFromErrorBounds(0.1, 0.2, 0.05) == doctest::Approx(std::log(0.75 / 0.1)));
}

TEST_CASE("a constant mechanism yields zero") {
  const BlackBoxResult r =
      BlackBoxAudit([](const TabularDataset&, std::uint64_t) { return std::vector<double>{3.0}; },
                    kD0, kD1);
  CHECK(r.eps_lower == 0.0);
  CHECK(r.warning.has_value());
}

TEST_CASE("an identity leak is detected at the clopper-pearson limit") {
  BlackBoxOptions o;
  o.runs = 1000;
  o.gamma = 0.05;
  const BlackBoxResult r = BlackBoxAudit(Identity, kD0, kD1, o);
  CHECK(r.train_runs == 500);
  CHECK(r.eval_runs == 500);
  CHECK(r.eps_lower >= 4.0);
  // Zero errors on each half of the evaluation runs.
  bool alpha_matches = false;
  for (std::uint64_t n0 = 150; n0 <= 350; ++n0) {
    alpha_matches = alpha_matches ||
                    std::abs(r.alpha_ub - oracle::ClopperPearsonUpper(0, n0, 0.05)) < 1e-9;
  }
  CHECK(alpha_matches);
  CHECK(r.eps_lower == doctest::Approx(std::max(std::log((1 - r.alpha_ub) / r.beta_ub),
                                                std::log((1 - r.beta_ub) / r.alpha_ub))));
}

TEST_CASE("a laplace mechanism's lower bound stays below its epsilon") {
  BlackBoxOptions o;
  o.runs = 100000;
  o.seed = 5;
  const BlackBoxResult r = BlackBoxAudit(
      [](const TabularDataset& d, std::uint64_t seed) {
        Generator g(seed);
        return std::vector<double>{d.rows()[0][0] + g.Laplace(1.0)};
      },
      kD0, kD1, o);
  CHECK(r.eps_lower > 0.0);
  CHECK(r.eps_lower <= 1.0);
}

TEST_CASE("vector outputs go through the logistic scorer") {
  const BlackBoxResult r = BlackBoxAudit(
      [](const TabularDataset& d, std::uint64_t seed) {
        Generator g(seed);
        return std::vector<double>{g.Gaussian(1.0), 6.0 * d.rows()[0][0] + g.Gaussian(1.0)};
      },
      kD0, kD1);
  CHECK(r.eps_lower > 1.0);
}

TEST_CASE("rejections map to a separable score") {
  const BlackBoxResult r = BlackBoxAudit(
      [](const TabularDataset& d, std::uint64_t) {
        return std::vector<double>{d.rows()[0][0] > 0 ? NAN : 0.0};
      },
      kD0, kD1);
  CHECK(r.eps_lower >= 4.0);
}

TEST_CASE("results are reproducible and serialize") {
  const BlackBoxResult a = BlackBoxAudit(Identity, kD0, kD1, {.seed = 3});
  const BlackBoxResult b = BlackBoxAudit(Identity, kD0, kD1, {.seed = 3});
  CHECK(a.ToJson() == b.ToJson());
  CHECK(a.ToJson().at("eval_runs").get<std::size_t>() == 500);
}

TEST_CASE("invalid options are rejected") {
  CHECK_THROWS_AS(BlackBoxAudit(Identity, kD0, kD1, {.runs = 10}), InvalidArgumentError);
  CHECK_THROWS_AS(BlackBoxAudit(Identity, kD0, kD1, {.gamma = 1.5}), InvalidArgumentError);
  CHECK_THROWS_AS(BlackBoxAudit(Identity, kD0, kD1, {.delta = 1.0}), InvalidArgumentError);
}

}  // namespace
}  // namespace dpaudit
