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

// Privacy loss distribution (PLD) arithmetic on a fixed loss grid.
//
// A DiscretePld stores the law of the privacy loss ln(P(o)/Q(o)), o ~ P,
// rounded up to multiples of a grid step, plus the mass of outcomes that
// only P can produce (loss +infinity). Every constructor here rounds and
// truncates in the pessimistic direction, so the hockey-stick divergence
// computed from a DiscretePld never understates the exact one.

#ifndef DPAUDIT_ACCOUNTANT_H_
#define DPAUDIT_ACCOUNTANT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dpaudit/value.h"

namespace dpaudit {

inline constexpr double kDefaultGridStep = 1e-3;
// Tail mass below this bound is folded away during discretization and
// composition.
inline constexpr double kTailMassBound = 1e-12;
// Losses above this value go to the infinity mass; losses below its negation
// fold into the smallest grid point.
inline constexpr double kLossCap = 40.0;

class DiscretePld {
 public:
  // masses[i] sits at loss (k_min + i) * grid_step. Validates the mass
  // invariants (nonnegative, total with delta_inf within 1e-9 of one).
  DiscretePld(double grid_step, std::int64_t k_min, std::vector<double> masses,
              double delta_inf);

  // Mass 1 at loss 0.
  static DiscretePld Identity(double grid_step = kDefaultGridStep);
  // All mass on +infinity: perfectly distinguishable outputs.
  static DiscretePld FullyDistinguishable(double grid_step = kDefaultGridStep);
  // Pessimistic discretization of an arbitrary finite PMF over losses.
  static DiscretePld FromPmf(std::span<const double> losses,
                             std::span<const double> masses, double delta_inf,
                             double grid_step = kDefaultGridStep);

  double grid_step() const { return grid_step_; }
  std::int64_t k_min() const { return k_min_; }
  std::int64_t k_max() const {
    return k_min_ + static_cast<std::int64_t>(masses_.size()) - 1;
  }
  const std::vector<double>& masses() const { return masses_; }
  double delta_inf() const { return delta_inf_; }
  double Loss(std::size_t i) const {
    return static_cast<double>(k_min_ + static_cast<std::int64_t>(i)) *
           grid_step_;
  }
  double MaxLoss() const { return static_cast<double>(k_max()) * grid_step_; }

  // Hockey-stick divergence delta(eps), evaluated exactly from the masses.
  double DeltaAt(double epsilon) const;
  // Smallest multiple of grid_step with DeltaAt <= delta. Throws
  // NoFiniteEpsilonError when delta <= delta_inf.
  double EpsilonAt(double delta) const;

  // {grid_step, k_min, masses, delta_inf}
  Value ToJson() const;
  static DiscretePld FromJson(const Value& v);

  // Folds the upper tail with mass below `bound` into delta_inf and the lower
  // tail into its highest dropped point's successor; strips zero edges.
  void TruncateTails(double bound = kTailMassBound);

 private:
  double grid_step_;
  std::int64_t k_min_;
  std::vector<double> masses_;
  double delta_inf_;
};

struct PrivacyProfile {
  std::vector<double> epsilons;  // nondecreasing
  std::vector<double> deltas;    // in [0, 1], nonincreasing
};

enum class ConvolutionMethod { kAuto, kDirect, kFft };

// Convolution of finite masses; infinity masses combine as
// 1 - prod(1 - delta_inf_i). All inputs must share one grid step.
DiscretePld Compose(std::span<const DiscretePld> plds,
                    ConvolutionMethod method = ConvolutionMethod::kAuto);
DiscretePld Compose(const DiscretePld& a, const DiscretePld& b,
                    ConvolutionMethod method = ConvolutionMethod::kAuto);

// Loss of Laplace(0, scale) against Laplace(sensitivity, scale).
DiscretePld AnalyticLaplacePld(double sensitivity, double scale,
                               double grid_step = kDefaultGridStep);
// Loss of N(0, sigma^2) against N(sensitivity, sigma^2).
DiscretePld AnalyticGaussianPld(double sensitivity, double sigma,
                                double grid_step = kDefaultGridStep);

// Closed-form hockey-stick divergence of the Gaussian mechanism.
double GaussianDelta(double sensitivity, double sigma, double epsilon);
// Smallest sigma with GaussianDelta(sensitivity, sigma, epsilon) <= delta,
// by bisection to 1e-12 relative width.
double CalibrateGaussianSigma(double epsilon, double delta, double sensitivity);

// eps * sqrt(2 k ln(1/delta_slack)) + k eps (e^eps - 1). The composed delta
// is k * delta_each + delta_slack; delta_each does not enter the epsilon.
double AdvancedCompositionEpsilon(double epsilon, double delta_each,
                                  std::int64_t k, double delta_slack);

}  // namespace dpaudit

#endif  // DPAUDIT_ACCOUNTANT_H_
