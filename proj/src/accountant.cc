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

#include "dpaudit/accountant.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>

#include "dpaudit/errors.h"
#include "dpaudit/stats.h"

namespace dpaudit {
namespace {

// Slack when rounding a loss up to the grid, so that a loss which is a grid
// point up to floating-point noise is not pushed one step higher.
constexpr double kRoundingSlack = 1e-9;
// Above this many multiply-adds the FFT path is used.
constexpr double kDirectConvolutionLimit = 4e6;

std::int64_t RoundUp(double loss, double step) {
  return static_cast<std::int64_t>(std::ceil(loss / step - kRoundingSlack));
}

void CheckStep(double step) {
  if (!(step > 0) || !std::isfinite(step)) {
    throw InvalidArgumentError("grid step must be positive and finite");
  }
}

bool SameStep(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

// Connect-the-dots discretization of a known privacy profile. Grid points
// x_k = k * step for k in [k_lo, k_hi] carry masses chosen so that the
// hockey-stick divergence matches delta_fn exactly at every grid point. In
// t = e^eps a PLD's delta is piecewise linear with kinks at e^{x_k}, and the
// exact delta is convex in t, so the chords dominate it in between. Below the
// grid the chord runs to delta(-inf) = 1; above it delta stays at its top
// value, which becomes the infinity mass.
DiscretePld ConnectTheDots(const std::function<double(double)>& delta_fn,
                           std::int64_t k_lo, std::int64_t k_hi, double step) {
  const std::size_t n = static_cast<std::size_t>(k_hi - k_lo + 1);
  std::vector<double> delta(n);
  for (std::size_t i = 0; i < n; ++i) {
    delta[i] = std::clamp(delta_fn(static_cast<double>(k_lo + static_cast<std::int64_t>(i)) * step),
                          0.0, 1.0);
  }
  // Enforce monotonicity against evaluation noise.
  for (std::size_t i = 1; i < n; ++i) delta[i] = std::min(delta[i], delta[i - 1]);
  const double delta_inf = delta[n - 1];
  std::vector<double> masses(n, 0.0);
  // e^{x_i} * slope of segment (i, i + 1) in t.
  const double h = std::expm1(step);
  auto scaled_slope = [&](std::size_t i) { return (delta[i + 1] - delta[i]) / h; };
  for (std::size_t i = 0; i < n; ++i) {
    const double right = i + 1 < n ? scaled_slope(i) : 0.0;
    // The left segment's slope, rescaled from e^{x_{i-1}} to e^{x_i}.
    const double left = i == 0 ? delta[0] - 1.0 : scaled_slope(i - 1) * std::exp(step);
    masses[i] = std::max(0.0, right - left);
  }
  // Settle any imbalance from clamping or the truncated range at the lowest
  // losses, where it cannot change delta(eps) for eps above them.
  double finite = 0.0;
  for (double m : masses) finite += m;
  double excess = finite - (1.0 - delta_inf);
  if (excess < 0) {
    masses[0] -= excess;
  } else {
    for (std::size_t i = 0; i < n && excess > 0; ++i) {
      const double take = std::min(masses[i], excess);
      masses[i] -= take;
      excess -= take;
    }
  }
  DiscretePld pld(step, k_lo, std::move(masses), delta_inf);
  pld.TruncateTails();
  return pld;
}

std::vector<double> ConvolveDirect(const std::vector<double>& a,
                                   const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    const double ai = a[i];
    double* row = out.data() + i;
    for (std::size_t j = 0; j < b.size(); ++j) row[j] += ai * b[j];
  }
  return out;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

std::vector<double> ConvolveFft(const std::vector<double>& a,
                                const std::vector<double>& b) {
  const std::size_t n = a.size() + b.size() - 1;
  std::size_t size = 1;
  while (size < n) size <<= 1;
  const std::size_t bins = size / 2 + 1;

  std::unique_ptr<double, FftwDeleter> in(
      static_cast<double*>(fftw_malloc(sizeof(double) * size)));
  std::unique_ptr<fftw_complex, FftwDeleter> fa(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
  std::unique_ptr<fftw_complex, FftwDeleter> fb(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));

  auto forward = [&](const std::vector<double>& src, fftw_complex* dst) {
    std::fill(in.get(), in.get() + size, 0.0);
    std::copy(src.begin(), src.end(), in.get());
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(size), in.get(), dst,
                                          FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  };
  forward(a, fa.get());
  forward(b, fb.get());
  for (std::size_t i = 0; i < bins; ++i) {
    const double re = fa.get()[i][0] * fb.get()[i][0] - fa.get()[i][1] * fb.get()[i][1];
    const double im = fa.get()[i][0] * fb.get()[i][1] + fa.get()[i][1] * fb.get()[i][0];
    fa.get()[i][0] = re;
    fa.get()[i][1] = im;
  }
  fftw_plan inverse = fftw_plan_dft_c2r_1d(static_cast<int>(size), fa.get(),
                                           in.get(), FFTW_ESTIMATE);
  fftw_execute(inverse);
  fftw_destroy_plan(inverse);

  std::vector<double> out(n);
  const double norm = 1.0 / static_cast<double>(size);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(0.0, in.get()[i] * norm);
  return out;
}

}  // namespace

DiscretePld::DiscretePld(double grid_step, std::int64_t k_min,
                         std::vector<double> masses, double delta_inf)
    : grid_step_(grid_step),
      k_min_(k_min),
      masses_(std::move(masses)),
      delta_inf_(delta_inf) {
  CheckStep(grid_step_);
  if (masses_.empty()) masses_.push_back(0.0);
  if (!(delta_inf_ >= 0 && delta_inf_ <= 1)) {
    throw InvalidArgumentError("pld: delta_inf must lie in [0, 1]");
  }
  double total = delta_inf_;
  for (double m : masses_) {
    if (!(m >= 0) || !std::isfinite(m)) {
      throw InvalidArgumentError("pld: masses must be finite and nonnegative");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgumentError("pld: total mass " + std::to_string(total) +
                               " is not 1");
  }
}

DiscretePld DiscretePld::Identity(double grid_step) {
  return DiscretePld(grid_step, 0, {1.0}, 0.0);
}

DiscretePld DiscretePld::FullyDistinguishable(double grid_step) {
  return DiscretePld(grid_step, 0, {0.0}, 1.0);
}

DiscretePld DiscretePld::FromPmf(std::span<const double> losses,
                                 std::span<const double> masses,
                                 double delta_inf, double grid_step) {
  CheckStep(grid_step);
  if (losses.size() != masses.size() || losses.empty()) {
    throw InvalidArgumentError("pld: losses and masses must be nonempty and aligned");
  }
  std::vector<std::int64_t> keys;
  keys.reserve(losses.size());
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (std::isnan(losses[i])) throw InvalidArgumentError("pld: NaN loss");
    if (losses[i] > kLossCap) {
      delta_inf += masses[i];
      keys.push_back(std::numeric_limits<std::int64_t>::max());
    } else {
      keys.push_back(RoundUp(std::max(losses[i], -kLossCap), grid_step));
    }
  }
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (auto k : keys) {
    if (k == std::numeric_limits<std::int64_t>::max()) continue;
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  if (lo > hi) return DiscretePld(grid_step, 0, {0.0}, std::min(1.0, delta_inf));
  std::vector<double> grid(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] == std::numeric_limits<std::int64_t>::max()) continue;
    grid[static_cast<std::size_t>(keys[i] - lo)] += masses[i];
  }
  return DiscretePld(grid_step, lo, std::move(grid), delta_inf);
}

double DiscretePld::DeltaAt(double epsilon) const {
  double sum = 0.0;
  for (std::size_t i = masses_.size(); i-- > 0;) {
    const double loss = Loss(i);
    if (loss <= epsilon) break;
    sum += masses_[i] * -std::expm1(epsilon - loss);
  }
  return std::clamp(delta_inf_ + sum, 0.0, 1.0);
}

double DiscretePld::EpsilonAt(double delta) const {
  if (delta <= delta_inf_) {
    throw NoFiniteEpsilonError("delta " + std::to_string(delta) +
                               " is not above the infinity mass " +
                               std::to_string(delta_inf_));
  }
  if (DeltaAt(0.0) <= delta) return 0.0;
  // Beyond the largest loss, delta(eps) equals delta_inf.
  std::int64_t lo = 0;
  std::int64_t hi = static_cast<std::int64_t>(
      std::ceil((std::max(MaxLoss(), 0.0) + 5.0) / grid_step_));
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (DeltaAt(static_cast<double>(mid) * grid_step_) <= delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return static_cast<double>(hi) * grid_step_;
}

void DiscretePld::TruncateTails(double bound) {
  std::size_t top = masses_.size();
  double upper = 0.0;
  while (top > 1 && upper + masses_[top - 1] <= bound) {
    upper += masses_[top - 1];
    --top;
  }
  std::size_t bottom = 0;
  double lower = 0.0;
  while (bottom + 1 < top && lower + masses_[bottom] <= bound) {
    lower += masses_[bottom];
    ++bottom;
  }
  if (top == masses_.size() && bottom == 0) return;
  std::vector<double> kept(masses_.begin() + static_cast<std::ptrdiff_t>(bottom),
                           masses_.begin() + static_cast<std::ptrdiff_t>(top));
  kept.front() += lower;
  k_min_ += static_cast<std::int64_t>(bottom);
  masses_ = std::move(kept);
  delta_inf_ = std::min(1.0, delta_inf_ + upper);
}

Value DiscretePld::ToJson() const {
  Value masses = Value::array();
  for (double m : masses_) masses.push_back(m);
  return Value{{"grid_step", grid_step_},
               {"k_min", k_min_},
               {"masses", std::move(masses)},
               {"delta_inf", delta_inf_}};
}

DiscretePld DiscretePld::FromJson(const Value& v) {
  try {
    return DiscretePld(v.at("grid_step").get<double>(),
                       v.at("k_min").get<std::int64_t>(),
                       v.at("masses").get<std::vector<double>>(),
                       v.at("delta_inf").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pld json: ") + e.what());
  }
}

DiscretePld Compose(const DiscretePld& a, const DiscretePld& b,
                    ConvolutionMethod method) {
  if (!SameStep(a.grid_step(), b.grid_step())) {
    throw InvalidArgumentError("compose: mixed grid steps");
  }
  if (method == ConvolutionMethod::kAuto) {
    const double work = static_cast<double>(a.masses().size()) *
                        static_cast<double>(b.masses().size());
    method = work > kDirectConvolutionLimit ? ConvolutionMethod::kFft
                                            : ConvolutionMethod::kDirect;
  }
  std::vector<double> masses = method == ConvolutionMethod::kFft
                                   ? ConvolveFft(a.masses(), b.masses())
                                   : ConvolveDirect(a.masses(), b.masses());
  const double delta_inf =
      1.0 - (1.0 - a.delta_inf()) * (1.0 - b.delta_inf());
  // Renormalize rounding drift so the mass invariant holds exactly.
  double finite = 0.0;
  for (double m : masses) finite += m;
  const double target = 1.0 - delta_inf;
  if (finite > 0 && target > 0) {
    const double scale = target / finite;
    for (double& m : masses) m *= scale;
  }
  DiscretePld out(a.grid_step(), a.k_min() + b.k_min(), std::move(masses),
                  std::clamp(delta_inf, 0.0, 1.0));
  out.TruncateTails();
  return out;
}

DiscretePld Compose(std::span<const DiscretePld> plds, ConvolutionMethod method) {
  if (plds.empty()) throw InvalidArgumentError("compose: empty list");
  DiscretePld acc = plds.front();
  for (std::size_t i = 1; i < plds.size(); ++i) acc = Compose(acc, plds[i], method);
  return acc;
}

DiscretePld AnalyticLaplacePld(double sensitivity, double scale,
                               double grid_step) {
  if (!(sensitivity > 0) || !(scale > 0) || !std::isfinite(sensitivity) ||
      !std::isfinite(scale)) {
    throw InvalidArgumentError("laplace pld: sensitivity and scale must be positive");
  }
  CheckStep(grid_step);
  const double r = sensitivity / scale;
  // delta(eps) = 1 - e^{(eps - r) / 2} on [-r, r], 1 - e^eps below -r and 0
  // above r.
  auto delta = [r](double eps) {
    if (eps >= r) return 0.0;
    if (eps <= -r) return -std::expm1(eps);
    return -std::expm1((eps - r) / 2.0);
  };
  const double cap = std::min(r, kLossCap);
  const std::int64_t k_hi = static_cast<std::int64_t>(std::ceil(cap / grid_step - kRoundingSlack));
  const std::int64_t k_lo = -static_cast<std::int64_t>(std::ceil(cap / grid_step - kRoundingSlack));
  return ConnectTheDots(delta, std::min<std::int64_t>(k_lo, -1), std::max<std::int64_t>(k_hi, 1),
                        grid_step);
}

DiscretePld AnalyticGaussianPld(double sensitivity, double sigma,
                                double grid_step) {
  if (!(sensitivity > 0) || !(sigma > 0) || !std::isfinite(sensitivity) ||
      !std::isfinite(sigma)) {
    throw InvalidArgumentError("gaussian pld: sensitivity and sigma must be positive");
  }
  CheckStep(grid_step);
  // The loss is itself normal with mean mu and standard deviation s.
  const double s = sensitivity / sigma;
  const double mu = 0.5 * s * s;
  // Phi(-z) ~= 1e-12.
  constexpr double kTailZ = 7.034483825;
  const double hi = std::clamp(mu + kTailZ * s, grid_step, kLossCap);
  const double lo = std::clamp(mu - kTailZ * s, -kLossCap, -grid_step);
  auto delta = [sensitivity, sigma](double eps) { return GaussianDelta(sensitivity, sigma, eps); };
  return ConnectTheDots(delta, static_cast<std::int64_t>(std::floor(lo / grid_step)),
                        static_cast<std::int64_t>(std::ceil(hi / grid_step)), grid_step);
}

double GaussianDelta(double sensitivity, double sigma, double epsilon) {
  const double a = sensitivity / (2.0 * sigma);
  const double b = epsilon * sigma / sensitivity;
  return NormalCdf(a - b) - std::exp(epsilon) * NormalCdf(-a - b);
}

double CalibrateGaussianSigma(double epsilon, double delta, double sensitivity) {
  if (!(epsilon > 0) || !(delta > 0 && delta < 1) || !(sensitivity > 0)) {
    throw InvalidArgumentError(
        "gaussian calibration needs epsilon > 0, delta in (0,1), sensitivity > 0");
  }
  double lo = sensitivity * 1e-6;
  double hi = sensitivity;
  while (GaussianDelta(sensitivity, hi, epsilon) > delta) hi *= 2.0;
  while (GaussianDelta(sensitivity, lo, epsilon) <= delta) lo /= 2.0;
  while ((hi - lo) > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (GaussianDelta(sensitivity, mid, epsilon) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double AdvancedCompositionEpsilon(double epsilon, double delta_each,
                                  std::int64_t k, double delta_slack) {
  if (k < 1 || !(epsilon >= 0) || !std::isfinite(epsilon) ||
      !(delta_slack > 0 && delta_slack < 1) ||
      !(delta_each >= 0 && delta_each < 1)) {
    throw InvalidArgumentError(
        "advanced composition needs k >= 1, eps >= 0, delta' in (0,1)");
  }
  const double kd = static_cast<double>(k);
  return epsilon * std::sqrt(2.0 * kd * std::log(1.0 / delta_slack)) +
         kd * epsilon * std::expm1(epsilon);
}

}  // namespace dpaudit
