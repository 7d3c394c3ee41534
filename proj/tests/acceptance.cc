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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dpaudit/accountant.h"
#include "dpaudit/blackbox.h"
#include "dpaudit/corpus.h"
#include "dpaudit/distaudit.h"
#include "dpaudit/errors.h"
#include "dpaudit/recorder.h"
#include "dpaudit/runner.h"
#include "dpaudit/tradeoff.h"
#include "dpaudit/validator.h"
#include "oracles.h"

namespace dpaudit {
namespace {

constexpr double kStep = kDefaultGridStep;
// Absolute accuracy of the adaptive quadrature behind the exact divergences.
constexpr double kQuadratureTolerance = 1e-10;
// Rounding between two evaluations of one closed form.
constexpr double kRoundingTolerance = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string Fmt(const char* format, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), format, a);
  return buf;
}

std::string Fmt(const char* format, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

std::string Fmt(const char* format, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

// 1. Detection matrix.
Outcome DetectionMatrixMatches() {
  Outcome o;
  const DetectionMatrix full = RunMatrix();
  std::size_t matched = 0;
  for (const MatrixRow& r : full.rows) {
    if (r.ok) {
      ++matched;
    } else {
      o.detail += " mismatch:" + r.name + "/" + VariantName(r.variant);
    }
  }
  MatrixOptions rr;
  rr.record_replay_only = true;
  const DetectionMatrix structural = RunMatrix(rr);
  o.pass = full.ok() && full.rows.size() == 18 && structural.seconds < 10.0;
  o.detail = std::to_string(matched) + "/" + std::to_string(full.rows.size()) +
             " rows match; record/replay-only matrix " + Fmt("%.3f s (< 10 s)", structural.seconds) +
             o.detail;
  return o;
}

// 2. Scaled count on D = [0,0,0], D' = [0,0,0,0].
Outcome ScaledCountDistance() {
  const PipelineCase c = MakeCase("scaled_count", Variant::kBuggy);
  const std::vector<Column> schema = c.schema;
  const TabularDataset d(schema, {{0.0}, {0.0}, {0.0}});
  const TabularDataset dp(schema, {{0.0}, {0.0}, {0.0}, {0.0}});
  const TraceRun run = GenerateTraces(c.pipeline, c.name, d, dp, c.claimed_epsilon, 0);
  const AuditReport report = ValidateRecords(run.record, run.replay);
  Outcome o{false, "no SensitivityViolation"};
  for (const Violation& v : report.violations) {
    if (v.kind != ViolationKind::kSensitivityViolation) continue;
    const double measured = ValueToReal(v.measured);
    const double declared = ValueToReal(v.declared);
    o.pass = measured == 2.0 && declared == 1.0;
    o.detail = Fmt("SensitivityViolation at call %.0f, measured %.17g, declared %g",
                   static_cast<double>(v.call_index.value_or(-1)), measured, declared);
  }
  return o;
}

// 3. Empirical PLD calibration of the Laplace mechanism.
Outcome LaplaceCalibration() {
  Outcome o;
  auto lm = std::make_shared<const LaplaceMechanism>();
  const TabularDataset d = TabularDataset::FromValues({0.0, 0.0, 0.0});
  const TabularDataset dp = TabularDataset::FromValues({0.0, 0.0, 0.0, 0.0});
  for (double eps0 : {0.5, 1.0, 2.0}) {
    const Pipeline count = [lm, eps0](const TabularDataset& data, double, AuditContext& ctx) {
      const MechanismParams p{.epsilon = eps0, .delta = 0, .sensitivity = 1.0, .scale = {}};
      return Value::array({ctx.InvokeScalar(lm, p, static_cast<double>(data.size()))});
    };
    const auto start = std::chrono::steady_clock::now();
    double lo = INFINITY, hi = -INFINITY;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const TraceRun run = GenerateTraces(count, "laplace_count", d, dp, eps0, seed);
      DistAuditOptions opt;
      opt.samples = 100000;
      opt.delta = 1e-6;
      opt.eps_claimed = eps0;
      opt.seed = seed;
      opt.force_empirical = true;
      const double eps_hat = DistributionalAudit(run.record, run.replay, run.registry, opt).eps_hat;
      lo = std::min(lo, eps_hat);
      hi = std::max(hi, eps_hat);
    }
    const double secs = Seconds(start);
    const bool ok = lo >= 0.6 * eps0 && hi <= eps0 + 0.2 && secs < 60.0;
    o.pass = o.pass && ok;
    o.detail += Fmt("eps0=%g: eps_hat in [%.3f, ", eps0, lo) + Fmt("%.3f] over 20 seeds, ", hi) +
                Fmt("%.2f s; ", secs);
  }
  o.detail.resize(o.detail.size() - 2);
  return o;
}

// 4. Round-trip of profiles through profile_to_pld, and dominance of the
// analytic PLDs over the numerically integrated divergence.
Outcome Pessimism() {
  Outcome o;
  double worst_round_trip = 0;
  std::vector<std::function<double(double)>> profiles;
  for (double sigma : {0.5, 1.0, 2.0}) {
    profiles.push_back([sigma](double e) { return GaussianDelta(1.0, sigma, e); });
  }
  for (double b : {0.5, 1.0, 2.0}) {
    profiles.push_back([b](double e) { return oracle::LaplaceDeltaNumeric(1.0, b, e); });
  }
  for (const auto& fn : profiles) {
    PrivacyProfile prof;
    for (int i = 0; i <= 4000; ++i) {
      prof.epsilons.push_back(i * kStep);
      prof.deltas.push_back(fn(i * kStep));
    }
    const DiscretePld pld = ProfileToPld(prof, kStep);
    for (std::size_t i = 0; i < prof.epsilons.size(); ++i) {
      worst_round_trip =
          std::max(worst_round_trip, std::abs(pld.DeltaAt(prof.epsilons[i]) - prof.deltas[i]));
    }
  }
  // An empirical profile as well, convexified from samples.
  {
    const LaplaceMechanism lm;
    const std::vector<double> a{0.0}, b{1.0};
    const MechanismParams p{};
    const OutputSamples sp = SampleOutputs(lm, a, p, 100000, 1, 1, kStreamD);
    const OutputSamples sq = SampleOutputs(lm, b, p, 100000, 1, 1, kStreamDp);
    const TradeoffCurve f = EstimateTradeoff(sp, sq, OutputKind::kContinuous);
    const std::vector<double> grid = EpsilonGrid(100000);
    const PrivacyProfile prof =
        MaxProfile(TradeoffToProfile(f, grid), TradeoffToProfile(f.Swapped(), grid));
    const DiscretePld pld = ProfileToPld(prof, kStep);
    for (std::size_t i = 0; i < prof.epsilons.size(); ++i) {
      worst_round_trip =
          std::max(worst_round_trip, std::abs(pld.DeltaAt(prof.epsilons[i]) - prof.deltas[i]));
    }
  }

  // Every grid point until the exact divergence falls below the quadrature
  // tolerance; beyond that delta >= 0 settles dominance.
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> sens(0.1, 2.0), scale(0.3, 3.0);
  double worst_deficit = 0;
  std::size_t points = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const double d = sens(rng), s = scale(rng);
    const DiscretePld lap = AnalyticLaplacePld(d, s);
    const DiscretePld gau = AnalyticGaussianPld(d, s);
    for (int family = 0; family < 2; ++family) {
      const DiscretePld& pld = family == 0 ? lap : gau;
      for (std::int64_t k = 0;; ++k) {
        const double e = static_cast<double>(k) * kStep;
        const double exact = family == 0 ? oracle::LaplaceDeltaNumeric(d, s, e)
                                         : oracle::GaussianDeltaNumeric(d, s, e);
        if (exact < kQuadratureTolerance) break;
        worst_deficit = std::max(worst_deficit, exact - pld.DeltaAt(e));
        ++points;
      }
    }
  }
  o.pass = worst_round_trip <= 1e-9 && worst_deficit <= kQuadratureTolerance;
  o.detail = Fmt("round-trip max error %.3g (<= 1e-9); ", worst_round_trip) +
             Fmt("dominance over %.0f grid points of 20 random Laplace and Gaussian sets, ",
                 static_cast<double>(points)) +
             Fmt("largest shortfall %.3g (quadrature tolerance 1e-10)", worst_deficit);
  return o;
}

// 5. Analytic Gaussian PLD against the closed form.
Outcome GaussianOracle() {
  double worst_above = 0, worst_below = 0;
  for (double sigma : {0.5, 1.0, 4.0}) {
    const DiscretePld p = AnalyticGaussianPld(1.0, sigma);
    for (double eps : {0.0, 0.5, 1.0, 2.0}) {
      const double gap = p.DeltaAt(eps) - oracle::GaussianDelta(1.0, sigma, eps);
      worst_above = std::max(worst_above, gap);
      worst_below = std::max(worst_below, -gap);
    }
  }
  return {worst_above <= 1e-4 && worst_below <= kRoundingTolerance,
          Fmt("max excess %.3g (<= 1e-4), max shortfall %.3g (rounding, <= 1e-12)", worst_above,
              worst_below)};
}

// 6. Odometer with 1/delta' where ln(1/delta') belongs.
Outcome OdometerDiscrepancy() {
  const double buggy = BuggyAdvancedCompositionEpsilon(0.1, 10, 1e-6);
  const double correct = AdvancedCompositionEpsilon(0.1, 0.0, 10, 1e-6);
  const double buggy_oracle = oracle::AdvancedCompositionMissingLog(0.1, 10, 1e-6);
  const double correct_oracle = oracle::AdvancedComposition(0.1, 10, 1e-6);
  CaseRunOptions run;
  run.mode = AuditMode::kDistributional;
  const CaseOutcome out = RunCase(MakeCase("odometer", Variant::kBuggy), run);
  const bool flagged = out.Flags(ViolationKind::kAccountingDiscrepancy);
  const bool matches = std::abs(buggy - buggy_oracle) <= 1e-9 * buggy_oracle &&
                       std::abs(correct - correct_oracle) <= 1e-12 * correct_oracle;
  return {matches && buggy / correct >= 100 && flagged,
          Fmt("buggy %.4f vs correct %.4f, ratio %.1f", buggy, correct, buggy / correct) +
              (flagged ? "; AccountingDiscrepancy emitted" : "; no AccountingDiscrepancy")};
}

// 7. Double spend.
Outcome DoubleSpend() {
  Outcome o;
  for (bool sampled : {false, true}) {
    double eps_hat[2];
    for (Variant v : {Variant::kBuggy, Variant::kFixed}) {
      const PipelineCase c = MakeCase("double_spend", v);
      const NeighborPair pair = c.DesignatedPair(0);
      const TraceRun run = GenerateTraces(c.pipeline, c.name, pair.d, pair.dp, 1.0, 0);
      DistAuditOptions opt;
      opt.samples = 100000;
      opt.delta = 1e-6;
      opt.eps_claimed = 1.0;
      opt.force_empirical = sampled;
      eps_hat[v == Variant::kBuggy ? 0 : 1] =
          DistributionalAudit(run.record, run.replay, run.registry, opt).eps_hat;
    }
    o.pass = o.pass && eps_hat[0] >= 1.5 && eps_hat[1] <= 1.15;
    o.detail += std::string(sampled ? "sampled: " : "analytic: ") +
                Fmt("buggy eps_hat %.3f (>= 1.5), fixed %.3f (<= 1.15); ", eps_hat[0], eps_hat[1]);
  }
  o.detail.resize(o.detail.size() - 2);
  return o;
}

// 8. Replay with D' = D reproduces the record run.
Outcome ReplayDeterminism() {
  std::size_t runs = 0, failures = 0;
  std::string first_failure;
  for (const PipelineCase& c : AllCases()) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const TabularDataset d = c.base_dataset(seed);
      const TraceRun run = GenerateTraces(c.pipeline, c.name, d, d, c.claimed_epsilon, seed);
      const AuditReport report = ValidateRecords(run.record, run.replay);
      const bool same = run.record_output && run.replay_output &&
                        run.record_output->dump() == run.replay_output->dump();
      ++runs;
      if (!report.passed() || run.replay.stop_reason || !same) {
        ++failures;
        if (first_failure.empty()) first_failure = c.name + "/" + VariantName(c.variant);
      }
    }
  }
  return {failures == 0, Fmt("%.0f runs over 20 case variants and 50 seeds, %.0f failures",
                             static_cast<double>(runs), static_cast<double>(failures)) +
                             (first_failure.empty() ? "" : " (first: " + first_failure + ")")};
}

// 9. Black-box baseline sanity.
Outcome BlackBoxSanity() {
  const TabularDataset d0 = TabularDataset::FromValues({0.0});
  const TabularDataset d1 = TabularDataset::FromValues({1.0});
  const BlackBoxResult constant = BlackBoxAudit(
      [](const TabularDataset&, std::uint64_t) { return std::vector<double>{0.0}; }, d0, d1);
  BlackBoxOptions opt;
  opt.runs = 1000;
  opt.gamma = 0.05;
  opt.delta = 0.0;
  const BlackBoxResult leak = BlackBoxAudit(
      [](const TabularDataset& d, std::uint64_t) { return std::vector<double>{d.rows()[0][0]}; },
      d0, d1, opt);
  // Zero errors on n evaluation runs bound the error rate by 1 - gamma^(1/n).
  const double oracle_eps =
      std::max(std::log((1 - leak.alpha_ub) / leak.beta_ub),
               std::log((1 - leak.beta_ub) / leak.alpha_ub));
  bool cp_matches = false;
  for (std::uint64_t n = 1; n < leak.eval_runs; ++n) {
    cp_matches = cp_matches ||
                 std::abs(leak.alpha_ub - oracle::ClopperPearsonUpper(0, n, 0.05)) < 1e-9;
  }
  const bool ok = constant.eps_lower == 0.0 && leak.eps_lower >= 4.0 && cp_matches &&
                  std::abs(leak.eps_lower - oracle_eps) < 1e-12;
  return {ok, Fmt("constant eps_lower %g; identity leak eps_lower %.3f (>= 4), ",
                  constant.eps_lower, leak.eps_lower) +
                  (cp_matches ? "Clopper-Pearson bound matches the oracle"
                              : "Clopper-Pearson bound differs from the oracle")};
}

// 10. Pathological inputs.
Outcome PathologicalInputs() {
  const double kNaN = std::numeric_limits<double>::quiet_NaN();
  const double kInf = std::numeric_limits<double>::infinity();
  std::size_t flagged = 0, unguarded_total = 0, rejected = 0, guarded_total = 0;
  std::string misses;

  // The corpus case on each pathological strategy.
  for (const std::string& strategy : {"add_nan", "add_inf"}) {
    const PipelineCase b = MakeCase("unguarded_inputs", Variant::kBuggy);
    const PipelineCase f = MakeCase("unguarded_inputs", Variant::kFixed);
    for (const NeighborPair& pair :
         GenNeighbors(b.base_dataset(0), b.adjacency, ParseStrategy(strategy), 0)) {
      const TraceRun rb = GenerateTraces(b.pipeline, b.name, pair.d, pair.dp, 1.0, 0);
      ++unguarded_total;
      if (ValidateRecords(rb.record, rb.replay).Has(ViolationKind::kSensitivityViolation)) {
        ++flagged;
      } else {
        misses += " corpus/" + strategy;
      }
      const TraceRun rf = GenerateTraces(f.pipeline, f.name, pair.d, pair.dp, 1.0, 0);
      ++guarded_total;
      const AuditReport report = ValidateRecords(rf.record, rf.replay);
      if (report.passed() && rf.replay.rejection && rf.replay.entries.empty()) ++rejected;
    }
  }

  // Each primitive alone, on NaN and both infinities.
  using Factory = std::function<PrimitivePtr(bool guarded)>;
  const std::vector<std::pair<std::string, Factory>> prims{
      {"laplace",
       [](bool g) { return std::make_shared<const LaplaceMechanism>(MechanismOptions{g, false}); }},
      {"gaussian",
       [](bool g) { return std::make_shared<const GaussianMechanism>(MechanismOptions{g, false}); }},
      {"exponential", [](bool g) {
         return std::make_shared<const ExponentialMechanism>(MechanismOptions{g, false});
       }}};
  for (const auto& [name, make] : prims) {
    for (double bad : {kNaN, kInf, -kInf}) {
      for (bool guarded : {false, true}) {
        const PrimitivePtr mech = make(guarded);
        const Pipeline pipeline = [mech](const TabularDataset& data, double eps,
                                         AuditContext& ctx) {
          double s = 0;
          for (const Row& r : data.rows()) s += r[0];
          const MechanismParams p{.epsilon = eps, .delta = 1e-6, .sensitivity = 1.0, .scale = {}};
          const double in[2] = {s, -s};
          return RealsToValue(ctx.Invoke(mech, p, in));
        };
        const TabularDataset d = TabularDataset::FromValues({0.2, 0.4});
        const TabularDataset dp = TabularDataset::FromValues({0.2, 0.4, bad});
        const TraceRun run = GenerateTraces(pipeline, name, d, dp, 1.0, 0);
        const AuditReport report = ValidateRecords(run.record, run.replay);
        if (guarded) {
          ++guarded_total;
          // The rejecting run on D' must log nothing.
          if (report.passed() && report.rejection && run.replay.rejection &&
              run.replay.entries.empty()) {
            ++rejected;
          }
          // Rejecting before anything is logged also holds when D itself
          // carries the value.
          const TraceRun direct = GenerateTraces(pipeline, name, dp, dp, 1.0, 0);
          ++guarded_total;
          if (direct.record.rejection && direct.record.entries.empty()) ++rejected;
        } else {
          ++unguarded_total;
          if (report.Has(ViolationKind::kSensitivityViolation)) {
            ++flagged;
          } else {
            misses += " " + name + "/" + FormatReal(bad);
          }
        }
      }
    }
  }
  return {flagged == unguarded_total && rejected == guarded_total,
          Fmt("unguarded flagged %.0f/%.0f; guarded rejected with zero entries %.0f/",
              static_cast<double>(flagged), static_cast<double>(unguarded_total),
              static_cast<double>(rejected)) +
              std::to_string(guarded_total) + misses};
}

}  // namespace
}  // namespace dpaudit

int main() {
  using dpaudit::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"detection matrix", dpaudit::DetectionMatrixMatches},
      {"scaled count distance", dpaudit::ScaledCountDistance},
      {"laplace calibration", dpaudit::LaplaceCalibration},
      {"pessimism", dpaudit::Pessimism},
      {"gaussian oracle", dpaudit::GaussianOracle},
      {"odometer discrepancy", dpaudit::OdometerDiscrepancy},
      {"double spend", dpaudit::DoubleSpend},
      {"replay determinism", dpaudit::ReplayDeterminism},
      {"black-box sanity", dpaudit::BlackBoxSanity},
      {"pathological inputs", dpaudit::PathologicalInputs},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %s: %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
