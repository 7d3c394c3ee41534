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

#include "dpaudit/distaudit.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dpaudit/errors.h"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double EpsilonOrInf(const DiscretePld& pld, double delta) {
  try {
    return pld.EpsilonAt(delta);
  } catch (const NoFiniteEpsilonError&) {
    return kInf;
  }
}

std::string Fmt(double x) {
  if (!std::isfinite(x)) return FormatReal(x);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

bool SameInputs(const TraceEntry& a, const TraceEntry& b) {
  return BitwiseEqual(a.input, b.input) && a.params && b.params && *a.params == *b.params;
}

}  // namespace

OutputSamples SampleOutputs(const Primitive& mech, std::span<const double> q,
                            const MechanismParams& params, std::size_t n,
                            std::uint64_t seed, std::uint64_t call_index,
                            std::uint64_t stream) {
  if (n == 0) throw InvalidArgumentError("sample_outputs: N must be at least 1");
  OutputSamples out;
  out.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    Generator gen = Generator::Derive(seed, call_index, r, stream);
    out.push_back(mech.Run(q, params, gen));
  }
  return out;
}

DiscretePld EmpiricalPld(const SamplePair& samples, OutputKind kind,
                         const TradeoffOptions& options, double grid_step) {
  const TradeoffCurve f = EstimateTradeoff(samples.outputs_d, samples.outputs_dp, kind, options);
  const std::vector<double> grid =
      EpsilonGrid(std::min(samples.outputs_d.size(), samples.outputs_dp.size()), grid_step);
  const PrivacyProfile forward = TradeoffToProfile(f, grid);
  const PrivacyProfile backward = TradeoffToProfile(f.Swapped(), grid);
  return ProfileToPld(MaxProfile(forward, backward), grid_step);
}

DiscretePld AnalyticCallPld(AnalyticAccountant accountant, std::span<const double> q_d,
                            std::span<const double> q_dp, double scale, double grid_step) {
  if (q_d.size() != q_dp.size()) return DiscretePld::FullyDistinguishable(grid_step);
  std::vector<double> shifts;
  for (std::size_t i = 0; i < q_d.size(); ++i) {
    const double s = q_d[i] == q_dp[i] ? 0.0 : std::abs(q_d[i] - q_dp[i]);
    if (!std::isfinite(s)) return DiscretePld::FullyDistinguishable(grid_step);
    if (s > 0) shifts.push_back(s);
  }
  if (shifts.empty()) return DiscretePld::Identity(grid_step);
  if (!(scale > 0)) return DiscretePld::FullyDistinguishable(grid_step);

  if (accountant == AnalyticAccountant::kGaussian) {
    double sq = 0;
    for (double s : shifts) sq += s * s;
    return AnalyticGaussianPld(std::sqrt(sq), scale, grid_step);
  }
  std::vector<DiscretePld> parts;
  parts.reserve(shifts.size());
  for (double s : shifts) parts.push_back(AnalyticLaplacePld(s, scale, grid_step));
  return parts.size() == 1 ? parts.front() : Compose(parts);
}

Value AuditVerdict::ToJson() const {
  Value calls = Value::array();
  for (const CallPldRecord& c : per_call) {
    calls.push_back({{"index", c.index},
                     {"kind", c.kind},
                     {"source", c.source},
                     {"eps_at_delta", RealToValue(c.eps_at_delta)}});
  }
  Value vs = Value::array();
  for (const Violation& v : violations) vs.push_back(v.ToJson());
  Value out{{"eps_hat", RealToValue(eps_hat)},
            {"eps_claimed", RealToValue(eps_claimed)},
            {"delta", RealToValue(delta)},
            {"rounding_slack", RealToValue(rounding_slack)},
            {"pass", pass},
            {"per_call", calls},
            {"violations", vs}};
  if (rejection) out["rejection"] = *rejection;
  return out;
}

AuditVerdict DistributionalAudit(const Trace& t, const Trace& tp,
                                 const PrimitiveRegistry& registry,
                                 const DistAuditOptions& options) {
  if (t.pipeline != tp.pipeline) {
    throw InvalidArgumentError("traces come from different pipelines");
  }
  if (tp.stop_reason) {
    throw InvalidArgumentError("distributional audit needs a complete replay; trace stopped: " +
                               tp.stop_reason->message);
  }
  if (!(options.delta > 0 && options.delta < 1)) {
    throw InvalidArgumentError("audit delta must lie in (0, 1)");
  }

  AuditVerdict verdict;
  verdict.eps_claimed = options.eps_claimed;
  verdict.delta = options.delta;
  if (t.rejection || tp.rejection) {
    // Nothing was released on the rejected side, so there is no loss to measure.
    verdict.rejection = tp.rejection ? tp.rejection : t.rejection;
    return verdict;
  }
  if (t.entries.size() != tp.entries.size()) {
    throw InvalidArgumentError("trace lengths differ without a stop reason");
  }

  std::vector<DiscretePld> plds;
  std::size_t pieces = 0;
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    const TraceEntry& a = t.entries[i];
    const TraceEntry& b = tp.entries[i];
    if (a.is_equality_check()) continue;
    if (!a.spec || !a.params || !b.params) {
      throw InvalidArgumentError("trace entry " + std::to_string(a.index) +
                                 " lacks its spec or parameters");
    }
    const std::vector<double> qd = ValueToReals(a.input);
    const std::vector<double> qdp = ValueToReals(b.input);

    CallPldRecord rec;
    rec.index = a.index;
    rec.kind = a.kind;
    if (a.spec->trusted() && !options.force_empirical) {
      const std::optional<double> scale = RealizedNoiseScale(*a.spec->accountant, *a.params);
      rec.source = "analytic";
      pieces += a.spec->accountant == AnalyticAccountant::kLaplace ? std::max<std::size_t>(qd.size(), 1) : 1;
      rec.pld = scale ? AnalyticCallPld(*a.spec->accountant, qd, qdp, *scale, options.grid_step)
                      : DiscretePld::FullyDistinguishable(options.grid_step);
    } else if (SameInputs(a, b)) {
      // Identical inputs and parameters give identical output laws.
      rec.source = "analytic";
      rec.pld = DiscretePld::Identity(options.grid_step);
    } else {
      auto it = registry.find(a.kind);
      if (it == registry.end()) {
        throw InvalidArgumentError("no registered primitive for kind '" + a.kind + "'");
      }
      const Primitive& mech = *it->second;
      SamplePair samples;
      samples.kind = a.kind;
      samples.call_index = a.index;
      const auto call = static_cast<std::uint64_t>(a.index);
      samples.outputs_d =
          SampleOutputs(mech, qd, *a.params, options.samples, options.seed, call, kStreamD);
      samples.outputs_dp =
          SampleOutputs(mech, qdp, *b.params, options.samples, options.seed, call, kStreamDp);
      rec.source = "empirical";
      ++pieces;
      if (samples.outputs_d.front().size() != samples.outputs_dp.front().size()) {
        rec.pld = DiscretePld::FullyDistinguishable(options.grid_step);
      } else {
        rec.pld = EmpiricalPld(samples, mech.output_kind(), options.tradeoff, options.grid_step);
      }
    }
    rec.eps_at_delta = EpsilonOrInf(rec.pld, options.delta);
    plds.push_back(rec.pld);
    verdict.per_call.push_back(std::move(rec));
  }

  const DiscretePld total =
      plds.empty() ? DiscretePld::Identity(options.grid_step) : Compose(plds);
  verdict.eps_hat = EpsilonOrInf(total, options.delta);
  verdict.rounding_slack = static_cast<double>(pieces) * options.grid_step;
  verdict.pass = verdict.eps_hat <= options.eps_claimed + verdict.rounding_slack;

  if (!verdict.pass) {
    verdict.violations.push_back(
        {ViolationKind::kAccountingDiscrepancy, std::nullopt, "",
         RealToValue(verdict.eps_hat), RealToValue(options.eps_claimed),
         "audited epsilon " + Fmt(verdict.eps_hat) + " at delta " + Fmt(options.delta) +
             " exceeds the claimed " + Fmt(options.eps_claimed)});
  }
  if (t.declared_budget) {
    const double declared = t.declared_budget->epsilon;
    // eps_hat is rounded up to the loss grid; allow two steps of slack.
    if (declared + 2 * options.grid_step < verdict.eps_hat) {
      verdict.violations.push_back(
          {ViolationKind::kAccountingDiscrepancy, std::nullopt, "", RealToValue(verdict.eps_hat),
           RealToValue(declared),
           "pipeline reports spending " + Fmt(declared) + " but the audited loss is " +
               Fmt(verdict.eps_hat)});
    } else if (verdict.eps_hat > 0 && declared > options.accounting_factor * verdict.eps_hat) {
      verdict.violations.push_back(
          {ViolationKind::kAccountingDiscrepancy, std::nullopt, "", RealToValue(verdict.eps_hat),
           RealToValue(declared),
           "pipeline reports spending " + Fmt(declared) + ", more than " +
               Fmt(options.accounting_factor) + " times the audited loss " +
               Fmt(verdict.eps_hat)});
    }
  }
  return verdict;
}

}  // namespace dpaudit
