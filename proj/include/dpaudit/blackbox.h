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

// Black-box epsilon lower bound from a distinguishing game.
//
// The whole mechanism runs R times, each time on D0 or D1 by a fair coin.
// A threshold test is fitted on the first half of the runs and evaluated on
// the second half; one-sided Clopper-Pearson upper bounds on its error
// rates turn into a high-confidence lower bound on epsilon.

#ifndef DPAUDIT_BLACKBOX_H_
#define DPAUDIT_BLACKBOX_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpaudit/neighbors.h"
#include "dpaudit/value.h"

namespace dpaudit {

// Runs the mechanism once on `data` with randomness seeded by `run_seed`.
using BlackBoxMechanism =
    std::function<std::vector<double>(const TabularDataset& data, std::uint64_t run_seed)>;

inline constexpr std::size_t kMinBlackBoxRuns = 100;

struct BlackBoxOptions {
  std::size_t runs = 1000;
  double delta = 0.0;
  double gamma = 0.05;
  std::uint64_t seed = 0;
};

struct BlackBoxResult {
  double eps_lower = 0;
  double alpha_ub = 1;
  double beta_ub = 1;
  std::size_t train_runs = 0;
  std::size_t eval_runs = 0;
  double threshold = 0;
  // True when the test flags D1 for scores above the threshold.
  bool flag_above = true;
  std::optional<std::string> warning;

  Value ToJson() const;
};

// max(ln((1 - a - delta) / b), ln((1 - b - delta) / a), 0), with log of a
// nonpositive numerator read as no evidence.
double EpsilonFromErrorBounds(double alpha_ub, double beta_ub, double delta);

BlackBoxResult BlackBoxAudit(const BlackBoxMechanism& mech, const TabularDataset& d0,
                             const TabularDataset& d1, const BlackBoxOptions& options = {});

}  // namespace dpaudit

#endif  // DPAUDIT_BLACKBOX_H_
