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

#include "dpaudit/corpus.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>

#include "dpaudit/accountant.h"
#include "dpaudit/errors.h"
#include "dpaudit/mechanisms.h"

namespace dpaudit {
namespace {

using Prim = std::shared_ptr<const Primitive>;

Prim Laplace(bool guarded = true) {
  return std::make_shared<LaplaceMechanism>(MechanismOptions{.guarded = guarded});
}

Prim Gaussian(bool guarded = true) {
  return std::make_shared<GaussianMechanism>(MechanismOptions{.guarded = guarded});
}

Prim Exponential(bool guarded = true) {
  return std::make_shared<ExponentialMechanism>(MechanismOptions{.guarded = guarded});
}

MechanismParams Params(double epsilon, double sensitivity, double delta = 0.0) {
  return MechanismParams{.epsilon = epsilon, .delta = delta, .sensitivity = sensitivity,
                         .scale = std::nullopt};
}

// NaN goes to the lower bound.
double Clip(double x, double lo, double hi) {
  if (std::isnan(x)) return lo;
  return std::clamp(x, lo, hi);
}

// Histogram slot for a possibly pathological value.
std::size_t Slot(double v, std::size_t size) {
  if (!(v >= 0)) return 0;
  if (v >= static_cast<double>(size - 1)) return size - 1;
  return static_cast<std::size_t>(v);
}

// Integer conversion that stays defined for huge, infinite and NaN values.
std::int64_t SafeInt(double v) {
  constexpr double kLimit = 1e15;
  if (std::isnan(v)) return 0;
  return static_cast<std::int64_t>(std::clamp(v, -kLimit, kLimit));
}

Value Reals(std::initializer_list<double> xs) {
  return RealsToValue(std::vector<double>(xs));
}

Column Categorical(std::string name, double lo, double hi) {
  return Column{.name = std::move(name), .type = ColumnType::kCategorical, .lo = lo, .hi = hi};
}

Column Real(std::string name, double lo, double hi) {
  return Column{.name = std::move(name), .type = ColumnType::kReal, .lo = lo, .hi = hi};
}

// ---------------------------------------------------------------------------
// scaled_count: count * multiplier released with the sensitivity of a plain
// count.

PipelineCase ScaledCount(Variant v, const CaseOptions& o) {
  PipelineCase c;
  c.name = "scaled_count";
  c.adjacency = AdjacencyModel::kAddRemove;
  c.strategy = "add_duplicate";
  c.extra_strategies = {"add_uniform", "remove_random", "add_marginal"};
  c.expected_violation = ViolationKind::kSensitivityViolation;
  c.schema = {Categorical("x", 0, 1)};
  c.base_dataset = [schema = c.schema](std::uint64_t) {
    return TabularDataset(schema, {{0.0}, {0.0}, {0.0}});
  };
  const bool buggy = v == Variant::kBuggy;
  const double multiplier = o.multiplier;
  c.pipeline = [buggy, multiplier, lm = Laplace()](const TabularDataset& d, double eps,
                                                   AuditContext& ctx) {
    const double q = static_cast<double>(d.size()) * multiplier;
    const double sensitivity = buggy ? 1.0 : multiplier;
    return Reals({ctx.InvokeScalar(lm, Params(eps, sensitivity), q)});
  };
  return c;
}

// ---------------------------------------------------------------------------
// covariance_release: data is clipped into newdata, but the statistic is
// computed on the raw data.

PipelineCase CovarianceRelease(Variant v, const CaseOptions&) {
  PipelineCase c;
  c.name = "covariance_release";
  c.adjacency = AdjacencyModel::kAddRemove;
  c.strategy = "add_out_of_domain";
  c.extra_strategies = {"add_uniform", "remove_random", "add_duplicate"};
  c.expected_violation = ViolationKind::kSensitivityViolation;
  c.schema = {Real("x", -1, 1), Real("y", -1, 1)};
  c.base_dataset = [schema = c.schema](std::uint64_t seed) {
    return GenSynthetic(seed, 200, schema);
  };
  const bool buggy = v == Variant::kBuggy;
  c.pipeline = [buggy, lm = Laplace()](const TabularDataset& d, double eps, AuditContext& ctx) {
    // Each clipped record moves x^2, xy and y^2 by at most 1.
    constexpr double kSensitivity = 3.0;
    std::vector<Row> newdata;
    for (const Row& r : d.rows()) newdata.push_back({Clip(r[0], -1, 1), Clip(r[1], -1, 1)});
    const std::vector<Row>& source = buggy ? d.rows() : newdata;
    double sxx = 0, sxy = 0, syy = 0;
    for (const Row& r : source) {
      sxx += r[0] * r[0];
      sxy += r[0] * r[1];
      syy += r[1] * r[1];
    }
    const double stat[3] = {sxx, sxy, syy};
    return RealsToValue(ctx.Invoke(lm, Params(eps, kSensitivity), stat));
  };
  return c;
}

// ---------------------------------------------------------------------------
// privbayes_lite: structure learning over two binary features. The buggy
// variant branches on the exact mutual information and lets K reach the
// number of features, which zeroes the marginal noise.

PipelineCase PrivBayesLite(Variant v, const CaseOptions& o) {
  PipelineCase c;
  c.name = "privbayes_lite";
  c.adjacency = AdjacencyModel::kReplaceOne;
  c.strategy = kCraftedStrategy;
  c.extra_strategies = {"replace_combined", "add_uniform", "add_marginal"};
  c.expected_violation = ViolationKind::kInvarianceViolation;
  c.schema = {Categorical("a", 0, 1), Categorical("b", 0, 1)};
  c.base_dataset = [schema = c.schema](std::uint64_t) {
    std::vector<Row> rows;
    for (int i = 0; i < 4; ++i) rows.push_back({0, 0});
    for (int i = 0; i < 4; ++i) rows.push_back({1, 1});
    return TabularDataset(schema, rows);
  };
  c.crafted_pair = [base = c.base_dataset]() {
    // Perfectly correlated features (MI = ln 2) against one broken pair.
    TabularDataset d = base(0);
    TabularDataset dp = d;
    dp.ReplaceRow(0, {0, 1});
    return NeighborPair{d, dp};
  };
  const bool buggy = v == Variant::kBuggy;
  c.pipeline = [buggy, o, lm = Laplace(), em = Exponential()](
                   const TabularDataset& d, double eps, AuditContext& ctx) {
    constexpr int kFeatures = 2;
    const std::size_t n = d.size();
    const double mi = MutualInformation(d.ColumnValues(0), d.ColumnValues(1));
    const double sens_mi = MutualInformationSensitivity(n);
    const double eps_mi = eps / 4, eps_em = eps / 4, eps_marg = eps / 2;

    double signal = mi;
    if (!buggy) signal = ctx.InvokeScalar(lm, Params(eps_mi, sens_mi), mi);
    const bool weak = ctx.EnsureEqual<bool>(o.mi_threshold >= signal);
    int k = weak ? 0 : o.privbayes_k;
    if (!buggy) k = std::min(k, kFeatures - 1);

    const double scores[2] = {mi, mi};  // parent orders a<-b and b<-a
    const double parent = ctx.Invoke(em, Params(eps_em, sens_mi), scores)[0];

    // n_features - K marginals share eps_marg; each has sensitivity 2/n.
    const int measured = kFeatures - k;
    MechanismParams mp = Params(eps_marg / std::max(measured, 1), 2.0 / static_cast<double>(n));
    mp.scale = 2.0 * measured / (static_cast<double>(n) * eps_marg);

    std::vector<double> out = {parent, static_cast<double>(k)};
    std::vector<std::vector<double>> marginals;
    if (k == 0) {
      for (std::size_t j = 0; j < 2; ++j) {
        std::vector<double> m(2, 0.0);
        for (const Row& r : d.rows()) m[Slot(r[j], 2)] += 1.0 / static_cast<double>(n);
        marginals.push_back(m);
      }
    } else {
      std::vector<double> joint(4, 0.0);
      for (const Row& r : d.rows()) {
        joint[2 * Slot(r[0], 2) + Slot(r[1], 2)] += 1.0 / static_cast<double>(n);
      }
      marginals.push_back(joint);
    }
    for (const auto& m : marginals) {
      for (double x : ctx.Invoke(lm, mp, m)) out.push_back(x);
    }
    return RealsToValue(out);
  };
  return c;
}

// ---------------------------------------------------------------------------
// odometer: k noisy counts; the odometer reports the advanced composition
// bound, with 1/delta' instead of ln(1/delta') in the buggy variant.

PipelineCase Odometer(Variant v, const CaseOptions& o) {
  PipelineCase c;
  c.name = "odometer";
  c.adjacency = AdjacencyModel::kAddRemove;
  c.strategy = "add_uniform";
  c.extra_strategies = {"remove_random", "add_duplicate", "add_marginal"};
  c.expected_violation = ViolationKind::kAccountingDiscrepancy;
  c.audit = DesignatedAudit::kDistributional;
  c.schema = {Categorical("x", 0, 1)};
  c.base_dataset = [schema = c.schema](std::uint64_t seed) {
    return GenSynthetic(seed, 100, schema);
  };
  const bool buggy = v == Variant::kBuggy;
  c.pipeline = [buggy, o, lm = Laplace()](const TabularDataset& d, double eps,
                                          AuditContext& ctx) {
    const int k = std::max(o.odometer_queries, 1);
    const double eps_q = eps / k;
    std::vector<double> out;
    for (int i = 0; i < k; ++i) {
      out.push_back(ctx.InvokeScalar(lm, Params(eps_q, 1.0), static_cast<double>(d.size())));
    }
    double spent = eps_q;
    if (k > 1) {
      spent = buggy ? BuggyAdvancedCompositionEpsilon(eps_q, k, o.odometer_slack_delta)
                    : AdvancedCompositionEpsilon(eps_q, 0.0, k, o.odometer_slack_delta);
    }
    ctx.DeclareSpent(spent, k > 1 ? o.odometer_slack_delta : 0.0);
    out.push_back(spent);
    return RealsToValue(out);
  };
  return c;
}

// ---------------------------------------------------------------------------
// noisy_sgd_lite: clipped full-batch gradient steps with Gaussian noise. The
// buggy variant derives the expected batch size from the private n.

PipelineCase NoisySgdLite(Variant v, const CaseOptions& o) {
  PipelineCase c;
  c.name = "noisy_sgd_lite";
  c.adjacency = AdjacencyModel::kAddRemove;
  c.strategy = "remove_random";
  c.extra_strategies = {"add_uniform", "add_duplicate", "add_marginal"};
  c.expected_violation = ViolationKind::kInvarianceViolation;
  c.schema = {Real("x", -1, 1), Real("y", -1, 1)};
  c.base_dataset = [schema = c.schema](std::uint64_t seed) {
    return GenSynthetic(seed, 200, schema);
  };
  const bool buggy = v == Variant::kBuggy;
  c.pipeline = [buggy, o, gm = Gaussian()](const TabularDataset& d, double eps,
                                           AuditContext& ctx) {
    constexpr double kClip = 1.0;
    constexpr double kLearningRate = 0.5;
    const int steps = std::max(o.sgd_steps, 1);
    const std::int64_t batch = ctx.EnsureEqual<std::int64_t>(
        buggy ? static_cast<std::int64_t>(static_cast<double>(d.size()) * 0.1)
              : o.sgd_public_batch);
    double w = 0;
    for (int t = 0; t < steps; ++t) {
      double grad = 0;
      for (const Row& r : d.rows()) {
        const double x = Clip(r[0], -1, 1);
        const double y = Clip(r[1], -1, 1);
        grad += Clip((w * x - y) * x, -kClip, kClip);
      }
      const double noisy = ctx.InvokeScalar(
          gm, Params(eps / steps, kClip, kCorpusDelta / steps), grad);
      w -= kLearningRate * noisy / static_cast<double>(std::max<std::int64_t>(batch, 1));
    }
    return Reals({w});
  };
  return c;
}

// ---------------------------------------------------------------------------
// domain_inference: marginal over a domain inferred from the data (buggy)
// or declared up front (fixed).

PipelineCase DomainInference(Variant v, const CaseOptions& o) {
  PipelineCase c;
  c.name = "domain_inference";
  c.adjacency = AdjacencyModel::kAddRemove;
  c.strategy = "add_out_of_domain";
  c.extra_strategies = {"add_uniform", "remove_random", "add_duplicate"};
  c.expected_violation = ViolationKind::kInvarianceViolation;
  const double top = static_cast<double>(o.declared_domain - 1);
  c.schema = {Categorical("c", 0, top)};
  c.base_dataset = [schema = c.schema](std::uint64_t seed) {
    return GenSynthetic(seed, 200, schema);
  };
  const bool buggy = v == Variant::kBuggy;
  c.pipeline = [buggy, o, lm = Laplace()](const TabularDataset& d, double eps,
                                          AuditContext& ctx) {
    std::int64_t domain = o.declared_domain;
    if (buggy) {
      double mx = 0;
      for (const Row& r : d.rows()) {
        if (!std::isnan(r[0])) mx = std::max(mx, r[0]);
      }
      domain = SafeInt(mx) + 1;
    }
    domain = std::clamp<std::int64_t>(ctx.EnsureEqual<std::int64_t>(domain), 1, 1 << 20);
    std::vector<double> hist(static_cast<std::size_t>(domain), 0.0);
    for (const Row& r : d.rows()) hist[Slot(r[0], hist.size())] += 1.0;
    return RealsToValue(ctx.Invoke(lm, Params(eps, 1.0), hist));
  };
  return c;
}

// ---------------------------------------------------------------------------
// double_spend: a mean encoder releasing a noisy sum and a noisy count, each
// at the full budget in the buggy variant.

PipelineCase DoubleSpend(Variant v, const CaseOptions& o) {
  PipelineCase c;
  c.name = "double_spend";
  c.adjacency = AdjacencyModel::kAddRemove;
  c.strategy = "add_out_of_domain";
  c.extra_strategies = {"add_uniform", "remove_random", "add_duplicate"};
  c.expected_violation = ViolationKind::kAccountingDiscrepancy;
  c.audit = DesignatedAudit::kDistributional;
  c.schema = {Real("v", 0, 10)};
  c.base_dataset = [schema = c.schema](std::uint64_t seed) {
    return GenSynthetic(seed, 200, schema);
  };
  const bool buggy = v == Variant::kBuggy;
  c.pipeline = [buggy, o, lm = Laplace()](const TabularDataset& d, double eps,
                                          AuditContext& ctx) {
    constexpr double kHi = 10.0;
    const double eps_each = buggy ? eps : eps / 2;
    double sum = 0;
    for (const Row& r : d.rows()) sum += Clip(r[0], 0, kHi);
    const double noisy_sum = ctx.InvokeScalar(lm, Params(eps_each, kHi), sum);
    const double noisy_count =
        ctx.InvokeScalar(lm, Params(eps_each, 1.0), static_cast<double>(d.size()));
    std::vector<double> out = {noisy_sum, noisy_count};
    if (o.check_lengths) {
      // A non-private look at the raw values decides whether to add a call.
      const bool any_out = std::any_of(d.rows().begin(), d.rows().end(),
                                       [](const Row& r) { return !(r[0] <= kHi); });
      if (any_out) out.push_back(ctx.InvokeScalar(lm, Params(eps_each, 1.0), 0.0));
    }
    return RealsToValue(out);
  };
  return c;
}

// ---------------------------------------------------------------------------
// linreg_objective: noisy coefficients of a regression objective. The buggy
// quadratic-term sensitivity squares the lower bound twice.

PipelineCase LinregObjective(Variant v, const CaseOptions& o) {
  PipelineCase c;
  c.name = "linreg_objective";
  c.adjacency = AdjacencyModel::kAddRemove;
  c.strategy = "add_uniform";
  c.extra_strategies = {"remove_random", "add_duplicate", "add_marginal"};
  c.expected_violation = ViolationKind::kSensitivityViolation;
  const double lo = o.linreg_lo;
  const double hi = o.linreg_hi;
  c.schema = {Real("x", lo, hi)};
  c.base_dataset = [schema = c.schema](std::uint64_t seed) {
    return GenSynthetic(seed, 200, schema);
  };
  const bool buggy = v == Variant::kBuggy;
  auto folded = std::make_shared<FoldedLaplaceMechanism>(0.0);
  c.pipeline = [buggy, lo, hi, folded, lm = Laplace()](const TabularDataset& d, double eps,
                                                       AuditContext& ctx) {
    const double bound = buggy ? std::max(std::abs(lo), std::abs(lo))
                               : std::max(std::abs(lo), std::abs(hi));
    const double sens_quad = bound * bound;
    const double sens_lin = std::max(std::abs(lo), std::abs(hi));
    double sxx = 0, sx = 0;
    for (const Row& r : d.rows()) {
      const double x = Clip(r[0], lo, hi);
      sxx += x * x;
      sx += x;
    }
    const double quad = ctx.InvokeScalar(folded, Params(eps / 2, sens_quad), sxx);
    const double lin = ctx.InvokeScalar(lm, Params(eps / 2, sens_lin), sx);
    return Reals({quad, lin});
  };
  return c;
}

// ---------------------------------------------------------------------------
// jam_lite: exponential-mechanism marginal selection scored by model error
// minus public error. Under replace-one the two terms can move in opposite
// directions, so the score sensitivity is 4, not 2.

PipelineCase JamLite(Variant v, const CaseOptions&) {
  PipelineCase c;
  c.name = "jam_lite";
  c.adjacency = AdjacencyModel::kReplaceOne;
  c.strategy = kCraftedStrategy;
  c.extra_strategies = {"replace_combined", "add_uniform", "add_duplicate"};
  c.expected_violation = ViolationKind::kSensitivityViolation;
  c.schema = {Categorical("c0", 0, 1), Categorical("c1", 0, 1)};
  c.base_dataset = [schema = c.schema](std::uint64_t) {
    std::vector<Row> rows;
    for (int i = 0; i < 10; ++i) rows.push_back({i < 6 ? 0.0 : 1.0, i % 2 == 0 ? 0.0 : 1.0});
    return TabularDataset(schema, rows);
  };
  c.crafted_pair = [base = c.base_dataset]() {
    // Moving one c0 value from 0 to 1 lowers the model error and raises the
    // public error.
    TabularDataset d = base(0);
    TabularDataset dp = d;
    Row r = d.rows()[0];
    r[0] = 1.0;
    dp.ReplaceRow(0, r);
    return NeighborPair{d, dp};
  };
  const bool buggy = v == Variant::kBuggy;
  c.pipeline = [buggy, lm = Laplace(), em = Exponential()](const TabularDataset& d, double eps,
                                                           AuditContext& ctx) {
    const double model[2][2] = {{0.6, 0.4}, {0.5, 0.5}};
    const double pub[2][2] = {{0.4, 0.6}, {0.5, 0.5}};
    const double n = static_cast<double>(d.size());
    std::vector<std::vector<double>> hist(2, std::vector<double>(2, 0.0));
    for (const Row& r : d.rows()) {
      for (std::size_t j = 0; j < 2; ++j) hist[j][Slot(r[j], 2)] += 1.0;
    }
    std::vector<double> scores(2);
    for (std::size_t j = 0; j < 2; ++j) {
      double model_err = 0, pub_err = 0;
      for (std::size_t b = 0; b < 2; ++b) {
        model_err += std::abs(hist[j][b] - n * model[j][b]);
        pub_err += std::abs(hist[j][b] - n * pub[j][b]);
      }
      scores[j] = model_err - pub_err;
    }
    const double score_sensitivity = buggy ? 2.0 : 4.0;
    const double choice = ctx.Invoke(em, Params(eps / 2, score_sensitivity), scores)[0];
    const std::vector<double>& chosen = hist[static_cast<std::size_t>(choice)];
    std::vector<double> out = {choice};
    for (double x : ctx.Invoke(lm, Params(eps / 2, 2.0), chosen)) out.push_back(x);
    return RealsToValue(out);
  };
  return c;
}

// ---------------------------------------------------------------------------
// unguarded_inputs: an unclipped sum fed to all three primitives. The buggy
// variant uses primitives that accept NaN and infinite inputs.

PipelineCase UnguardedInputs(Variant v, const CaseOptions&) {
  PipelineCase c;
  c.name = "unguarded_inputs";
  c.adjacency = AdjacencyModel::kAddRemove;
  c.strategy = "add_nan";
  c.extra_strategies = {"add_inf", "add_float_limit", "add_uniform"};
  c.expected_violation = ViolationKind::kSensitivityViolation;
  c.group = kPathologicalGroup;
  c.schema = {Real("x", 0, 1)};
  c.base_dataset = [schema = c.schema](std::uint64_t seed) {
    return GenSynthetic(seed, 50, schema);
  };
  const bool guarded = v == Variant::kFixed;
  c.pipeline = [lm = Laplace(guarded), gm = Gaussian(guarded), em = Exponential(guarded)](
                   const TabularDataset& d, double eps, AuditContext& ctx) {
    double s = 0;
    for (const Row& r : d.rows()) s += r[0];
    const double a = ctx.InvokeScalar(lm, Params(eps / 3, 1.0), s);
    const double b = ctx.InvokeScalar(gm, Params(eps / 3, 1.0, kCorpusDelta), s);
    const double scores[2] = {s, -s};
    const double pick = ctx.Invoke(em, Params(eps / 3, 1.0), scores)[0];
    return Reals({a, b, pick});
  };
  return c;
}

using Factory = PipelineCase (*)(Variant, const CaseOptions&);

const std::vector<std::pair<std::string, Factory>>& Registry() {
  static const std::vector<std::pair<std::string, Factory>> kRegistry = {
      {"scaled_count", ScaledCount},
      {"covariance_release", CovarianceRelease},
      {"privbayes_lite", PrivBayesLite},
      {"odometer", Odometer},
      {"noisy_sgd_lite", NoisySgdLite},
      {"domain_inference", DomainInference},
      {"double_spend", DoubleSpend},
      {"linreg_objective", LinregObjective},
      {"jam_lite", JamLite},
      {"unguarded_inputs", UnguardedInputs},
  };
  return kRegistry;
}

}  // namespace

std::string VariantName(Variant v) { return v == Variant::kBuggy ? "buggy" : "fixed"; }

Variant ParseVariant(const std::string& name) {
  if (name == "buggy") return Variant::kBuggy;
  if (name == "fixed") return Variant::kFixed;
  throw ParseError("unknown variant '" + name + "'");
}

std::string DesignatedAuditName(DesignatedAudit a) {
  return a == DesignatedAudit::kRecordReplay ? "record-replay" : "distributional";
}

NeighborPair PipelineCase::MakePair(const std::string& strategy_name,
                                    std::uint64_t seed) const {
  if (strategy_name == kCraftedStrategy) {
    if (!crafted_pair) {
      throw InvalidArgumentError("case '" + name + "' has no crafted pair");
    }
    return crafted_pair();
  }
  const NeighborStrategy s = ParseStrategy(strategy_name);
  return GenNeighbors(base_dataset(seed), adjacency, s, seed, 1).front();
}

Value PipelineCase::Manifest() const {
  Value v{{"name", name},
          {"variant", VariantName(variant)},
          {"adjacency", AdjacencyName(adjacency)},
          {"strategy", strategy},
          {"audit", DesignatedAuditName(audit)},
          {"group", group},
          {"claimed_epsilon", RealToValue(claimed_epsilon)},
          {"claimed_delta", RealToValue(claimed_delta)}};
  v["expected_violation"] =
      expected_violation ? Value(ViolationKindName(*expected_violation)) : Value(nullptr);
  return v;
}

const std::vector<std::string>& CaseNames() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names;
    for (const auto& [name, factory] : Registry()) names.push_back(name);
    return names;
  }();
  return kNames;
}

PipelineCase MakeCase(const std::string& name, Variant variant, const CaseOptions& options) {
  for (const auto& [n, factory] : Registry()) {
    if (n == name) {
      PipelineCase c = factory(variant, options);
      c.variant = variant;
      if (variant == Variant::kFixed) c.expected_violation.reset();
      return c;
    }
  }
  throw InvalidArgumentError("unknown pipeline '" + name + "'");
}

std::vector<PipelineCase> AllCases(const CaseOptions& options) {
  std::vector<PipelineCase> out;
  for (const std::string& name : CaseNames()) {
    out.push_back(MakeCase(name, Variant::kBuggy, options));
    out.push_back(MakeCase(name, Variant::kFixed, options));
  }
  return out;
}

double BuggyAdvancedCompositionEpsilon(double epsilon, std::int64_t k, double delta_slack) {
  if (!(delta_slack > 0 && delta_slack < 1) || k < 1 || !(epsilon >= 0)) {
    throw InvalidArgumentError("advanced composition: bad arguments");
  }
  const double kd = static_cast<double>(k);
  return epsilon * std::sqrt(2.0 * kd * (1.0 / delta_slack)) + kd * epsilon * std::expm1(epsilon);
}

double MutualInformation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InvalidArgumentError("mutual information: length mismatch");
  if (a.empty()) return 0.0;
  auto key = [](double x) { return std::bit_cast<std::uint64_t>(x); };
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> joint;
  std::map<std::uint64_t, double> ma, mb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{key(a[i]), key(b[i])}] += 1;
    ma[key(a[i])] += 1;
    mb[key(b[i])] += 1;
  }
  const double n = static_cast<double>(a.size());
  double mi = 0;
  for (const auto& [k, c] : joint) {
    mi += (c / n) * std::log(c * n / (ma[k.first] * mb[k.second]));
  }
  return std::max(mi, 0.0);
}

double MutualInformationSensitivity(std::size_t n) {
  if (n < 2) return std::log(2.0);
  const double nd = static_cast<double>(n);
  return std::log(nd) / nd + (nd - 1) / nd * std::log(nd / (nd - 1));
}

}  // namespace dpaudit
