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

#include "dpaudit/blackbox.h"

#include <algorithm>
#include <cmath>

#include "dpaudit/errors.h"
#include "dpaudit/rng.h"
#include "dpaudit/stats.h"
#include "dpaudit/tradeoff.h"

namespace dpaudit {
namespace {

constexpr std::uint64_t kCoinStream = 2;
constexpr std::uint64_t kRunStream = 3;
constexpr std::size_t kMaxCandidateThresholds = 4096;

struct Errors {
  std::uint64_t false_pos = 0;  // b = 0 flagged
  std::uint64_t false_neg = 0;  // b = 1 not flagged
  std::uint64_t n0 = 0;
  std::uint64_t n1 = 0;
};

Errors CountErrors(const std::vector<double>& scores, const std::vector<int>& bits,
                   std::size_t begin, std::size_t end, double t, bool above) {
  Errors e;
  for (std::size_t i = begin; i < end; ++i) {
    const bool flagged = above ? scores[i] > t : scores[i] < t;
    if (bits[i] == 0) {
      ++e.n0;
      if (flagged) ++e.false_pos;
    } else {
      ++e.n1;
      if (!flagged) ++e.false_neg;
    }
  }
  return e;
}

double BoundFromErrors(const Errors& e, double gamma, double delta, double* a_ub,
                       double* b_ub) {
  const double a = ClopperPearsonUpper(e.false_pos, e.n0, gamma);
  const double b = ClopperPearsonUpper(e.false_neg, e.n1, gamma);
  if (a_ub) *a_ub = a;
  if (b_ub) *b_ub = b;
  return EpsilonFromErrorBounds(a, b, delta);
}

}  // namespace

Value BlackBoxResult::ToJson() const {
  Value v{{"eps_lower", RealToValue(eps_lower)},
          {"alpha_ub", RealToValue(alpha_ub)},
          {"beta_ub", RealToValue(beta_ub)},
          {"train_runs", train_runs},
          {"eval_runs", eval_runs},
          {"threshold", RealToValue(threshold)},
          {"flag_above", flag_above}};
  v["warning"] = warning ? Value(*warning) : Value(nullptr);
  return v;
}

double EpsilonFromErrorBounds(double alpha_ub, double beta_ub, double delta) {
  auto side = [delta](double err_a, double err_b) {
    const double num = 1.0 - err_a - delta;
    if (!(num > 0) || !(err_b > 0)) return 0.0;
    return std::log(num / err_b);
  };
  return std::max({side(alpha_ub, beta_ub), side(beta_ub, alpha_ub), 0.0});
}

BlackBoxResult BlackBoxAudit(const BlackBoxMechanism& mech, const TabularDataset& d0,
                             const TabularDataset& d1, const BlackBoxOptions& options) {
  if (options.runs < kMinBlackBoxRuns) {
    throw InvalidArgumentError("blackbox audit needs at least " +
                               std::to_string(kMinBlackBoxRuns) + " runs");
  }
  if (!(options.gamma > 0 && options.gamma < 1)) {
    throw InvalidArgumentError("gamma must lie in (0, 1)");
  }
  if (!(options.delta >= 0 && options.delta < 1)) {
    throw InvalidArgumentError("delta must lie in [0, 1)");
  }

  const std::size_t r = options.runs;
  Generator coin = Generator::Derive(options.seed, 0, 0, kCoinStream);
  std::vector<int> bits(r);
  OutputSamples outputs(r);
  for (std::size_t i = 0; i < r; ++i) {
    bits[i] = static_cast<int>(coin.NextU64() >> 63);
    const std::uint64_t run_seed =
        Generator::Derive(options.seed, i, 0, kRunStream).NextU64();
    outputs[i] = mech(bits[i] ? d1 : d0, run_seed);
    if (outputs[i].size() != outputs[0].size()) {
      throw InvalidArgumentError("mechanism output width changed between runs");
    }
  }

  BlackBoxResult result;
  const std::size_t split = r / 2;
  result.train_runs = split;
  result.eval_runs = r - split;

  // Scores: the value itself for scalar outputs, a logistic fit on the
  // training half otherwise.
  std::vector<double> scores(r);
  if (outputs[0].size() == 1) {
    for (std::size_t i = 0; i < r; ++i) scores[i] = outputs[i][0];
  } else {
    OutputSamples neg;
    OutputSamples pos;
    for (std::size_t i = 0; i < split; ++i) (bits[i] ? pos : neg).push_back(outputs[i]);
    if (neg.empty() || pos.empty()) {
      result.warning = "training half holds a single class";
      return result;
    }
    const LogisticScorer model = LogisticScorer::Fit(neg, pos);
    for (std::size_t i = 0; i < r; ++i) scores[i] = model.Score(outputs[i]);
  }
  for (double& s : scores) {
    if (std::isnan(s)) s = -INFINITY;
  }
  if (std::all_of(scores.begin(), scores.end(), [&](double s) { return s == scores[0]; })) {
    result.warning = "all scores are equal; no distinguishing signal";
    return result;
  }

  std::vector<double> candidates(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(split));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  if (candidates.size() > kMaxCandidateThresholds) {
    std::vector<double> thinned;
    for (std::size_t j = 0; j < kMaxCandidateThresholds; ++j) {
      thinned.push_back(candidates[j * (candidates.size() - 1) / (kMaxCandidateThresholds - 1)]);
    }
    candidates = std::move(thinned);
  }

  double best = -1;
  for (double t : candidates) {
    for (bool above : {true, false}) {
      const Errors e = CountErrors(scores, bits, 0, split, t, above);
      if (e.n0 == 0 || e.n1 == 0) continue;
      const double eps = BoundFromErrors(e, options.gamma, options.delta, nullptr, nullptr);
      if (eps > best) {
        best = eps;
        result.threshold = t;
        result.flag_above = above;
      }
    }
  }
  if (best < 0) {
    result.warning = "training half holds a single class";
    return result;
  }

  const Errors e = CountErrors(scores, bits, split, r, result.threshold, result.flag_above);
  if (e.n0 == 0 || e.n1 == 0) {
    result.warning = "evaluation half holds a single class";
    return result;
  }
  result.eps_lower =
      BoundFromErrors(e, options.gamma, options.delta, &result.alpha_ub, &result.beta_ub);
  return result;
}

}  // namespace dpaudit
