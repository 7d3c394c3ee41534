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

// Empirical hypothesis-testing trade-off curves and their conversion to
// privacy profiles and loss distributions.
//
// Convention: P is the output law on D, Q the law on D'. A test that flags
// "Q" has type I error alpha = P(flag) and type II error beta = Q(no flag).
// The hockey-stick divergence of Q against P then satisfies
//   delta(eps) = 1 - min over tests of (e^eps * alpha + beta).

#ifndef DPAUDIT_TRADEOFF_H_
#define DPAUDIT_TRADEOFF_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "dpaudit/accountant.h"
#include "dpaudit/mechanisms.h"

namespace dpaudit {

using OutputSamples = std::vector<std::vector<double>>;

struct TradeoffPoint {
  double alpha;
  double beta;
};

struct TradeoffCurve {
  // Sorted by alpha; beta nonincreasing once convexified.
  std::vector<TradeoffPoint> points;
  bool convexified = false;

  // The same tests with the roles of P and Q exchanged.
  TradeoffCurve Swapped() const;
  // Piecewise-linear evaluation; requires a convexified curve.
  double BetaAt(double alpha) const;
};

inline constexpr std::size_t kMinSamplesPerSide = 100;
inline constexpr std::size_t kDefaultMaxThresholds = 4096;
inline constexpr double kDefaultConfidence = 0.05;

struct TradeoffOptions {
  // Replace each empirical (alpha, beta) by one-sided Clopper-Pearson upper
  // bounds at level 1 - gamma. Keeps sampling noise in the tails from
  // reading as privacy loss.
  bool confidence_adjust = true;
  double gamma = kDefaultConfidence;
  std::size_t max_thresholds = kDefaultMaxThresholds;
};

enum class ScorerKind { kAuto, kRaw, kLogistic, kCategorical };

// Maps every sample to a real score, larger meaning "more like Q".
// kAuto picks kCategorical for categorical outputs, kRaw for scalars and
// kLogistic for vectors.
std::pair<std::vector<double>, std::vector<double>> ScoreSamples(
    const OutputSamples& p, const OutputSamples& q, OutputKind kind,
    ScorerKind scorer = ScorerKind::kAuto);

// L2-regularized logistic regression fitted by iteratively reweighted least
// squares. Label 0 for `negatives`, 1 for `positives`.
class LogisticScorer {
 public:
  static LogisticScorer Fit(const OutputSamples& negatives, const OutputSamples& positives);
  double Score(std::span<const double> x) const;
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> mean_;
  std::vector<double> inv_scale_;
  std::vector<double> weights_;  // bias first
};

// Lower convex envelope of `points` together with (0, 1) and (1, 0).
TradeoffCurve LowerConvexHull(std::vector<TradeoffPoint> points);

// Sweeps thresholds in both directions over pooled scores and returns the
// convexified curve. Throws InsufficientDataError below kMinSamplesPerSide.
TradeoffCurve TradeoffFromScores(std::span<const double> scores_p,
                                 std::span<const double> scores_q,
                                 const TradeoffOptions& options = {});

TradeoffCurve EstimateTradeoff(const OutputSamples& p, const OutputSamples& q,
                               OutputKind kind, const TradeoffOptions& options = {});

// Grid 0, step, ..., ceil(ln(n) / step) * step.
std::vector<double> EpsilonGrid(std::size_t n, double grid_step = kDefaultGridStep);

// delta(eps) = clamp(1 - min_v(e^eps alpha_v + beta_v), 0, 1) over vertices.
PrivacyProfile TradeoffToProfile(const TradeoffCurve& f, std::span<const double> eps_grid);

// Pointwise maximum of profiles on a shared grid.
PrivacyProfile MaxProfile(const PrivacyProfile& a, const PrivacyProfile& b);

// Connect-the-dots PLD: masses at the grid losses chosen so that the
// hockey-stick divergence matches the profile at every grid epsilon, the
// profile's last value as the infinity mass and the rest at loss zero.
// Throws NonConvexProfileError when a mass comes out below -1e-12.
DiscretePld ProfileToPld(const PrivacyProfile& profile, double grid_step = kDefaultGridStep);

}  // namespace dpaudit

#endif  // DPAUDIT_TRADEOFF_H_
