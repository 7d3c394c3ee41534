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

#ifndef DPAUDIT_STATS_H_
#define DPAUDIT_STATS_H_

#include <cstdint>

namespace dpaudit {

// Standard normal CDF.
double NormalCdf(double x);

// One-sided Clopper-Pearson bounds on a binomial proportion after observing
// `successes` out of `trials`, each holding with probability 1 - gamma.
double ClopperPearsonUpper(std::uint64_t successes, std::uint64_t trials,
                           double gamma);
double ClopperPearsonLower(std::uint64_t successes, std::uint64_t trials,
                           double gamma);

}  // namespace dpaudit

#endif  // DPAUDIT_STATS_H_
