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

#include "dpaudit/stats.h"

#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "dpaudit/errors.h"

namespace dpaudit {
namespace {

void CheckBinomial(std::uint64_t successes, std::uint64_t trials, double gamma) {
  if (trials == 0 || successes > trials) {
    throw InvalidArgumentError("clopper-pearson: need 0 <= k <= n, n > 0");
  }
  if (!(gamma > 0 && gamma < 1)) {
    throw InvalidArgumentError("clopper-pearson: gamma must lie in (0, 1)");
  }
}

}  // namespace

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ClopperPearsonUpper(std::uint64_t successes, std::uint64_t trials,
                           double gamma) {
  CheckBinomial(successes, trials, gamma);
  if (successes == trials) return 1.0;
  // Closed form at k = 0 avoids the incomplete-beta inversion.
  if (successes == 0) {
    return -std::expm1(std::log(gamma) / static_cast<double>(trials));
  }
  return boost::math::ibeta_inv(static_cast<double>(successes + 1),
                                static_cast<double>(trials - successes),
                                1.0 - gamma);
}

double ClopperPearsonLower(std::uint64_t successes, std::uint64_t trials,
                           double gamma) {
  CheckBinomial(successes, trials, gamma);
  if (successes == 0) return 0.0;
  if (successes == trials) {
    return std::exp(std::log(gamma) / static_cast<double>(trials));
  }
  return boost::math::ibeta_inv(static_cast<double>(successes),
                                static_cast<double>(trials - successes + 1),
                                gamma);
}

}  // namespace dpaudit
