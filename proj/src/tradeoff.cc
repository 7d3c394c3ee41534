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

#include "dpaudit/tradeoff.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>

#include "dpaudit/errors.h"
#include "dpaudit/stats.h"

namespace dpaudit {
namespace {

constexpr double kNegativeMassTolerance = 1e-12;
constexpr double kRidge = 1e-6;
constexpr int kMaxNewtonSteps = 50;

// NaN scores sort below everything so that they form one tie class.
double Sanitize(double s) {
  return std::isnan(s) ? -std::numeric_limits<double>::infinity() : s;
}

std::vector<double> SortedScores(std::span<const double> s) {
  std::vector<double> out(s.size());
  std::transform(s.begin(), s.end(), out.begin(), Sanitize);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t CountAbove(const std::vector<double>& sorted, double t) {
  return static_cast<std::size_t>(sorted.end() -
                                  std::upper_bound(sorted.begin(), sorted.end(), t));
}

std::size_t CountBelow(const std::vector<double>& sorted, double t) {
  return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), t) -
                                  sorted.begin());
}

// Cut values for "score > t" and "score < t" tests. All distinct pooled
// values when there are few; otherwise an even rank grid plus geometric
// refinement toward both ends, where the informative tail tests live.
std::vector<double> Thresholds(const std::vector<double>& pooled, std::size_t cap) {
  std::vector<double> distinct;
  std::unique_copy(pooled.begin(), pooled.end(), std::back_inserter(distinct));
  if (distinct.size() <= cap) return distinct;

  const std::size_t m = pooled.size();
  std::vector<std::size_t> ranks;
  const std::size_t even = std::max<std::size_t>(cap / 2, 2);
  for (std::size_t j = 0; j <= even; ++j) ranks.push_back(std::min(m - 1, j * (m - 1) / even));
  for (std::size_t r = 1; r < m; r = r * 5 / 4 + 1) {
    ranks.push_back(r);
    ranks.push_back(m - 1 - r);
  }
  std::vector<double> out;
  out.reserve(ranks.size());
  for (std::size_t r : ranks) out.push_back(pooled[r]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

TradeoffCurve TradeoffCurve::Swapped() const {
  std::vector<TradeoffPoint> pts;
  pts.reserve(points.size());
  for (const TradeoffPoint& p : points) pts.push_back({p.beta, p.alpha});
  if (!convexified) {
    std::sort(pts.begin(), pts.end(),
              [](const TradeoffPoint& a, const TradeoffPoint& b) { return a.alpha < b.alpha; });
    return TradeoffCurve{std::move(pts), false};
  }
  return LowerConvexHull(std::move(pts));
}

double TradeoffCurve::BetaAt(double alpha) const {
  if (points.empty()) throw InvalidArgumentError("empty trade-off curve");
  if (alpha <= points.front().alpha) return points.front().beta;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const TradeoffPoint& a = points[i - 1];
    const TradeoffPoint& b = points[i];
    if (alpha <= b.alpha) {
      if (b.alpha == a.alpha) return std::min(a.beta, b.beta);
      const double w = (alpha - a.alpha) / (b.alpha - a.alpha);
      return a.beta + w * (b.beta - a.beta);
    }
  }
  return points.back().beta;
}

LogisticScorer LogisticScorer::Fit(const OutputSamples& negatives,
                                   const OutputSamples& positives) {
  if (negatives.empty() || positives.empty()) {
    throw InsufficientDataError("logistic scorer needs samples from both classes");
  }
  const std::size_t d = negatives.front().size();
  const std::size_t n = negatives.size() + positives.size();
  auto row = [&](std::size_t i) -> const std::vector<double>& {
    return i < negatives.size() ? negatives[i] : positives[i - negatives.size()];
  };

  LogisticScorer s;
  s.mean_.assign(d, 0.0);
  s.inv_scale_.assign(d, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (row(i).size() != d) throw InvalidArgumentError("logistic scorer: ragged samples");
    for (std::size_t j = 0; j < d; ++j) s.mean_[j] += Sanitize(row(i)[j]);
  }
  for (double& m : s.mean_) m /= static_cast<double>(n);
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = Sanitize(row(i)[j]) - s.mean_[j];
      var[j] += c * c;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(n));
    s.inv_scale_[j] = std::isfinite(sd) && sd > 0 ? 1.0 / sd : 0.0;
  }

  Eigen::MatrixXd x(n, d + 1);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x(static_cast<Eigen::Index>(i), 0) = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      double z = (Sanitize(row(i)[j]) - s.mean_[j]) * s.inv_scale_[j];
      if (!std::isfinite(z)) z = 0.0;
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = z;
    }
    y(static_cast<Eigen::Index>(i)) = i < negatives.size() ? 0.0 : 1.0;
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d + 1));
  for (int step = 0; step < kMaxNewtonSteps; ++step) {
    const Eigen::VectorXd eta = x * w;
    const Eigen::VectorXd p = (1.0 / (1.0 + (-eta.array()).exp())).matrix();
    const Eigen::VectorXd wts = (p.array() * (1.0 - p.array())).max(1e-12).matrix();
    Eigen::MatrixXd h = x.transpose() * wts.asDiagonal() * x;
    h.diagonal().array() += kRidge * static_cast<double>(n);
    const Eigen::VectorXd g = x.transpose() * (y - p) - kRidge * static_cast<double>(n) * w;
    const Eigen::VectorXd delta = h.ldlt().solve(g);
    w += delta;
    if (delta.norm() < 1e-10 * (1.0 + w.norm())) break;
  }
  s.weights_.assign(w.data(), w.data() + w.size());
  return s;
}

double LogisticScorer::Score(std::span<const double> x) const {
  if (x.size() + 1 != weights_.size()) {
    throw InvalidArgumentError("logistic scorer: dimension mismatch");
  }
  double z = weights_[0];
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double v = (Sanitize(x[j]) - mean_[j]) * inv_scale_[j];
    if (std::isfinite(v)) z += weights_[j + 1] * v;
  }
  return z;
}

std::pair<std::vector<double>, std::vector<double>> ScoreSamples(const OutputSamples& p,
                                                                 const OutputSamples& q,
                                                                 OutputKind kind,
                                                                 ScorerKind scorer) {
  if (p.empty() || q.empty()) throw InsufficientDataError("no samples to score");
  const std::size_t width = p.front().size();
  for (const auto* side : {&p, &q}) {
    for (const auto& s : *side) {
      if (s.size() != width) throw InvalidArgumentError("samples differ in shape");
    }
  }
  if (scorer == ScorerKind::kAuto) {
    if (kind == OutputKind::kCategorical) {
      scorer = ScorerKind::kCategorical;
    } else {
      scorer = width == 1 ? ScorerKind::kRaw : ScorerKind::kLogistic;
    }
  }

  std::vector<double> sp(p.size());
  std::vector<double> sq(q.size());
  switch (scorer) {
    case ScorerKind::kRaw:
      if (width != 1) throw InvalidArgumentError("raw scorer needs scalar outputs");
      for (std::size_t i = 0; i < p.size(); ++i) sp[i] = p[i][0];
      for (std::size_t i = 0; i < q.size(); ++i) sq[i] = q[i][0];
      break;
    case ScorerKind::kLogistic: {
      const LogisticScorer model = LogisticScorer::Fit(p, q);
      for (std::size_t i = 0; i < p.size(); ++i) sp[i] = model.Score(p[i]);
      for (std::size_t i = 0; i < q.size(); ++i) sq[i] = model.Score(q[i]);
      break;
    }
    case ScorerKind::kCategorical: {
      // Smoothed log-likelihood ratio of each observed outcome.
      std::map<std::vector<double>, std::pair<double, double>> counts;
      for (const auto& s : p) counts[s].first += 1;
      for (const auto& s : q) counts[s].second += 1;
      const double np = static_cast<double>(p.size());
      const double nq = static_cast<double>(q.size());
      auto llr = [&](const std::vector<double>& s) {
        const auto& [cp, cq] = counts.at(s);
        return std::log((cq + 0.5) / nq) - std::log((cp + 0.5) / np);
      };
      for (std::size_t i = 0; i < p.size(); ++i) sp[i] = llr(p[i]);
      for (std::size_t i = 0; i < q.size(); ++i) sq[i] = llr(q[i]);
      break;
    }
    case ScorerKind::kAuto:
      break;
  }
  return {std::move(sp), std::move(sq)};
}

TradeoffCurve LowerConvexHull(std::vector<TradeoffPoint> points) {
  points.push_back({0.0, 1.0});
  points.push_back({1.0, 0.0});
  for (TradeoffPoint& p : points) {
    p.alpha = std::clamp(p.alpha, 0.0, 1.0);
    p.beta = std::clamp(p.beta, 0.0, 1.0);
  }
  std::sort(points.begin(), points.end(), [](const TradeoffPoint& a, const TradeoffPoint& b) {
    return a.alpha < b.alpha || (a.alpha == b.alpha && a.beta < b.beta);
  });
  std::vector<TradeoffPoint> hull;
  for (const TradeoffPoint& p : points) {
    if (!hull.empty() && hull.back().alpha == p.alpha) continue;  // keeps the lowest beta
    while (hull.size() >= 2) {
      const TradeoffPoint& a = hull[hull.size() - 2];
      const TradeoffPoint& b = hull.back();
      const double cross =
          (b.alpha - a.alpha) * (p.beta - a.beta) - (b.beta - a.beta) * (p.alpha - a.alpha);
      if (cross <= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  // Past the minimum the envelope is flat at beta = 0; drop anything after
  // the first vertex that reaches it.
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (hull[i].beta == 0.0) {
      hull.resize(i + 1);
      if (hull.back().alpha < 1.0) hull.push_back({1.0, 0.0});
      break;
    }
  }
  return TradeoffCurve{std::move(hull), true};
}

TradeoffCurve TradeoffFromScores(std::span<const double> scores_p,
                                 std::span<const double> scores_q,
                                 const TradeoffOptions& options) {
  if (scores_p.size() < kMinSamplesPerSide || scores_q.size() < kMinSamplesPerSide) {
    throw InsufficientDataError("need at least " + std::to_string(kMinSamplesPerSide) +
                                " samples per side, got " + std::to_string(scores_p.size()) +
                                " and " + std::to_string(scores_q.size()));
  }
  const std::vector<double> p = SortedScores(scores_p);
  const std::vector<double> q = SortedScores(scores_q);
  std::vector<double> pooled;
  pooled.reserve(p.size() + q.size());
  std::merge(p.begin(), p.end(), q.begin(), q.end(), std::back_inserter(pooled));
  const std::vector<double> cuts = Thresholds(pooled, options.max_thresholds);

  const std::uint64_t np = p.size();
  const std::uint64_t nq = q.size();
  auto point = [&](std::uint64_t a_count, std::uint64_t b_count) {
    if (!options.confidence_adjust) {
      return TradeoffPoint{static_cast<double>(a_count) / static_cast<double>(np),
                           static_cast<double>(b_count) / static_cast<double>(nq)};
    }
    return TradeoffPoint{ClopperPearsonUpper(a_count, np, options.gamma),
                         ClopperPearsonUpper(b_count, nq, options.gamma)};
  };

  std::vector<TradeoffPoint> pts;
  pts.reserve(2 * cuts.size());
  for (double t : cuts) {
    // Flag Q when score > t.
    pts.push_back(point(CountAbove(p, t), nq - CountAbove(q, t)));
    // Flag Q when score < t.
    pts.push_back(point(CountBelow(p, t), nq - CountBelow(q, t)));
  }
  return LowerConvexHull(std::move(pts));
}

TradeoffCurve EstimateTradeoff(const OutputSamples& p, const OutputSamples& q,
                               OutputKind kind, const TradeoffOptions& options) {
  if (p.size() < kMinSamplesPerSide || q.size() < kMinSamplesPerSide) {
    throw InsufficientDataError("need at least " + std::to_string(kMinSamplesPerSide) +
                                " samples per side");
  }
  const auto [sp, sq] = ScoreSamples(p, q, kind);
  return TradeoffFromScores(sp, sq, options);
}

std::vector<double> EpsilonGrid(std::size_t n, double grid_step) {
  if (n < 2) throw InvalidArgumentError("epsilon grid needs n >= 2");
  if (!(grid_step > 0)) throw InvalidArgumentError("grid step must be positive");
  const auto k = static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(n)) / grid_step));
  std::vector<double> grid(k + 1);
  for (std::size_t i = 0; i <= k; ++i) grid[i] = static_cast<double>(i) * grid_step;
  return grid;
}

PrivacyProfile TradeoffToProfile(const TradeoffCurve& f, std::span<const double> eps_grid) {
  PrivacyProfile out;
  out.epsilons.assign(eps_grid.begin(), eps_grid.end());
  out.deltas.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    const double scale = std::exp(eps);
    double best = 1.0;  // the trivial test at (0, 1)
    for (const TradeoffPoint& v : f.points) best = std::min(best, scale * v.alpha + v.beta);
    out.deltas.push_back(std::clamp(1.0 - best, 0.0, 1.0));
  }
  return out;
}

PrivacyProfile MaxProfile(const PrivacyProfile& a, const PrivacyProfile& b) {
  if (a.epsilons != b.epsilons) throw InvalidArgumentError("profiles use different grids");
  PrivacyProfile out = a;
  for (std::size_t i = 0; i < out.deltas.size(); ++i) {
    out.deltas[i] = std::max(a.deltas[i], b.deltas[i]);
  }
  return out;
}

DiscretePld ProfileToPld(const PrivacyProfile& profile, double grid_step) {
  const std::size_t n = profile.epsilons.size();
  if (n == 0 || profile.deltas.size() != n) {
    throw InvalidArgumentError("profile_to_pld: empty or ragged profile");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(profile.epsilons[i] - static_cast<double>(i) * grid_step) > 1e-9) {
      throw InvalidArgumentError("profile_to_pld: epsilons must be 0, step, 2 step, ...");
    }
    if (!(profile.deltas[i] >= 0 && profile.deltas[i] <= 1)) {
      throw InvalidArgumentError("profile_to_pld: deltas must lie in [0, 1]");
    }
  }
  const double delta_inf = profile.deltas.back();
  // masses[k] sits at loss k * step; S0 and S1 are the running sums of
  // p and p e^{-x} over the masses already placed above the current point.
  std::vector<double> masses(n, 0.0);
  double s0 = 0;
  double s1 = 0;
  const double denom = -std::expm1(-grid_step);
  for (std::size_t i = n - 1; i-- > 0;) {
    const double eps = profile.epsilons[i];
    const double x = static_cast<double>(i + 1) * grid_step;
    const double lifted = std::exp(eps) * s1;
    const double numer = profile.deltas[i] - delta_inf - s0 + lifted;
    // Cancellation error in numer grows with the magnitudes involved.
    const double slack = kNegativeMassTolerance +
                         64 * std::numeric_limits<double>::epsilon() *
                             (profile.deltas[i] + s0 + lifted);
    double p = numer / denom;
    if (numer < -slack) {
      throw NonConvexProfileError("profile_to_pld: negative mass " + FormatReal(p) +
                                  " at loss " + std::to_string(x) +
                                  "; convexify the trade-off curve first");
    }
    p = std::max(p, 0.0);
    masses[i + 1] = p;
    s0 += p;
    s1 += p * std::exp(-x);
  }
  const double rest = 1.0 - delta_inf - s0;
  if (rest < -1e-9) {
    throw NonConvexProfileError("profile_to_pld: reconstructed masses exceed one");
  }
  masses[0] = std::max(rest, 0.0);
  DiscretePld pld(grid_step, 0, std::move(masses), delta_inf);
  return pld;
}

}  // namespace dpaudit
