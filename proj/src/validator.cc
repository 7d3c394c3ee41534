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

#include "dpaudit/validator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "dpaudit/accountant.h"
#include "dpaudit/errors.h"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool AllFinite(const std::vector<double>& xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

std::string Fmt(double x) {
  if (!std::isfinite(x)) return FormatReal(x);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

class Collector {
 public:
  Collector(AuditReport& report, const ValidatorOptions& options)
      : report_(report), options_(options) {}

  void Add(Violation v) {
    if (!options_.disabled.contains(v.kind)) report_.violations.push_back(std::move(v));
  }

 private:
  AuditReport& report_;
  const ValidatorOptions& options_;
};

void CheckCalibration(const TraceEntry& e, const ValidatorOptions& options,
                      Collector& out) {
  if (!e.spec || !e.spec->trusted() || !e.params) return;
  const AnalyticAccountant acc = *e.spec->accountant;
  const std::optional<double> implied = ImpliedNoiseScale(acc, *e.params);
  const std::optional<double> realized = RealizedNoiseScale(acc, *e.params);
  if (!realized) return;
  Violation v{ViolationKind::kNoiseMiscalibration, e.index, e.kind,
              RealToValue(*realized), implied ? RealToValue(*implied) : Value("none"), ""};
  if (!implied) {
    v.message = "declared (epsilon, delta) admits no finite noise scale; sampler used " +
                Fmt(*realized);
    out.Add(std::move(v));
    return;
  }
  const double r = *realized;
  const double i = *implied;
  if (r == i) return;
  bool bad;
  if (i == 0) {
    bad = r != 0;
  } else {
    bad = std::abs(r - i) / i > options.scale_tolerance;
  }
  if (!bad) return;
  v.message = "noise scale " + Fmt(r) + " but declared parameters imply " + Fmt(i);
  if (r == 0) v.message += " (no noise added)";
  out.Add(std::move(v));
}

}  // namespace

std::string ViolationKindName(ViolationKind k) {
  switch (k) {
    case ViolationKind::kControlFlowMismatch: return "ControlFlowMismatch";
    case ViolationKind::kInvarianceViolation: return "InvarianceViolation";
    case ViolationKind::kSensitivityViolation: return "SensitivityViolation";
    case ViolationKind::kNoiseMiscalibration: return "NoiseMiscalibration";
    case ViolationKind::kAccountingDiscrepancy: return "AccountingDiscrepancy";
    case ViolationKind::kInputDomainViolation: return "InputDomainViolation";
  }
  return "";
}

ViolationKind ParseViolationKind(const std::string& name) {
  for (ViolationKind k :
       {ViolationKind::kControlFlowMismatch, ViolationKind::kInvarianceViolation,
        ViolationKind::kSensitivityViolation, ViolationKind::kNoiseMiscalibration,
        ViolationKind::kAccountingDiscrepancy, ViolationKind::kInputDomainViolation}) {
    if (ViolationKindName(k) == name) return k;
  }
  throw ParseError("unknown violation kind '" + name + "'");
}

Value Violation::ToJson() const {
  Value v{{"kind", ViolationKindName(kind)},
          {"primitive", primitive},
          {"measured", measured},
          {"declared", declared},
          {"message", message}};
  v["call_index"] = call_index ? Value(*call_index) : Value(nullptr);
  return v;
}

Value CallSummary::ToJson() const {
  Value v{{"index", index}, {"kind", kind}, {"metric", metric}};
  v["distance"] = distance ? RealToValue(*distance) : Value(nullptr);
  v["declared_sensitivity"] =
      declared_sensitivity ? RealToValue(*declared_sensitivity) : Value(nullptr);
  return v;
}

bool AuditReport::Has(ViolationKind k) const {
  return std::any_of(violations.begin(), violations.end(),
                     [k](const Violation& v) { return v.kind == k; });
}

Value AuditReport::ToJson() const {
  Value vs = Value::array();
  for (const Violation& v : violations) vs.push_back(v.ToJson());
  Value summary = Value::array();
  for (const CallSummary& c : trace_summary) summary.push_back(c.ToJson());
  Value out{{"verdict", verdict()}, {"violations", vs}, {"trace_summary", summary}};
  if (rejection) out["rejection"] = *rejection;
  return out;
}

std::string AuditReport::ToText() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-6s %-16s %-8s %-14s %-14s\n", "call", "kind",
                "metric", "distance", "declared");
  out << line;
  for (const CallSummary& c : trace_summary) {
    std::snprintf(line, sizeof(line), "%-6lld %-16s %-8s %-14s %-14s\n",
                  static_cast<long long>(c.index), c.kind.c_str(), c.metric.c_str(),
                  c.distance ? Fmt(*c.distance).c_str() : "-",
                  c.declared_sensitivity ? Fmt(*c.declared_sensitivity).c_str() : "-");
    out << line;
  }
  if (rejection) out << "rejected: " << *rejection << "\n";
  for (const Violation& v : violations) {
    out << ViolationKindName(v.kind);
    if (v.call_index) out << " at call " << *v.call_index << " (" << v.primitive << ")";
    out << ": " << v.message << "\n";
  }
  out << "verdict: " << verdict() << "\n";
  return out.str();
}

double EmpiricalDistance(std::span<const double> a, std::span<const double> b, Metric m) {
  if (a.size() != b.size()) {
    throw InvalidArgumentError("empirical_distance: shapes " + std::to_string(a.size()) +
                               " and " + std::to_string(b.size()) + " differ");
  }
  double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) return kInf;
    const double d = a[i] == b[i] ? 0.0 : std::abs(a[i] - b[i]);
    switch (m) {
      case Metric::kL1: acc += d; break;
      case Metric::kL2: acc += d * d; break;
      case Metric::kLinf: acc = std::max(acc, d); break;
      case Metric::kHamming: acc += d > 0 ? 1.0 : 0.0; break;
    }
  }
  return m == Metric::kL2 ? std::sqrt(acc) : acc;
}

double ValueDistance(const Value& a, const Value& b, Metric m) {
  if (a.is_array() != b.is_array()) {
    throw InvalidArgumentError("empirical_distance: scalar against array");
  }
  const std::vector<double> x = ValueToReals(a);
  const std::vector<double> y = ValueToReals(b);
  return EmpiricalDistance(std::span<const double>(x), y, m);
}

std::optional<double> ImpliedNoiseScale(AnalyticAccountant a, const MechanismParams& p) {
  if (a == AnalyticAccountant::kLaplace) return p.sensitivity / p.epsilon;
  if (p.sensitivity == 0) return 0.0;
  if (!(p.delta > 0)) return std::nullopt;
  return CalibrateGaussianSigma(p.epsilon, p.delta, p.sensitivity);
}

std::optional<double> RealizedNoiseScale(AnalyticAccountant a, const MechanismParams& p) {
  if (p.scale) return p.scale;
  return ImpliedNoiseScale(a, p);
}

AuditReport ValidateRecords(const Trace& t, const Trace& tp,
                            const ValidatorOptions& options) {
  if (t.pipeline != tp.pipeline) {
    throw InvalidArgumentError("traces come from different pipelines: '" + t.pipeline +
                               "' and '" + tp.pipeline + "'");
  }
  if (t.mode != AuditorMode::kRecord || tp.mode != AuditorMode::kReplay) {
    throw InvalidArgumentError("expected a RECORD trace followed by a REPLAY trace");
  }

  AuditReport report;
  Collector out(report, options);
  if (t.rejection) report.rejection = t.rejection;
  if (tp.rejection) report.rejection = tp.rejection;

  const std::size_t aligned = std::min(t.entries.size(), tp.entries.size());
  for (std::size_t i = 0; i < aligned; ++i) {
    const TraceEntry& a = t.entries[i];
    const TraceEntry& b = tp.entries[i];
    if (a.kind != b.kind) {
      out.Add({ViolationKind::kControlFlowMismatch, b.index, b.kind, Value(b.kind),
               Value(a.kind), "call kinds diverge; later calls are not comparable"});
      return report;
    }
    if (a.is_equality_check()) {
      if (!BitwiseEqual(a.input, b.input)) {
        out.Add({ViolationKind::kInvarianceViolation, a.index, a.kind, b.input, a.input,
                 "ensure_equality value differs between runs"});
      }
      report.trace_summary.push_back({a.index, a.kind, "-", std::nullopt, std::nullopt});
      continue;
    }

    const Metric metric = a.spec ? a.spec->metric : Metric::kL1;
    CallSummary summary{a.index, a.kind, MetricName(metric), std::nullopt, std::nullopt};
    if (a.params) summary.declared_sensitivity = a.params->sensitivity;

    if (a.params && b.params && !(*a.params == *b.params)) {
      out.Add({ViolationKind::kInvarianceViolation, a.index, a.kind, b.params->ToJson(),
               a.params->ToJson(), "non-sensitive parameters differ between runs"});
    }

    const std::vector<double> qa = ValueToReals(a.input);
    const std::vector<double> qb = ValueToReals(b.input);
    if (!AllFinite(qa) || !AllFinite(qb)) {
      out.Add({ViolationKind::kInputDomainViolation, a.index, a.kind,
               AllFinite(qb) ? a.input : b.input, Value("finite"),
               "primitive received a NaN or infinite input"});
    }

    double distance;
    std::string shape_note;
    if (qa.size() == qb.size()) {
      distance = EmpiricalDistance(std::span<const double>(qa), qb, metric);
    } else {
      distance = kInf;
      shape_note = " (input length changed from " + std::to_string(qa.size()) + " to " +
                   std::to_string(qb.size()) + ")";
    }
    summary.distance = distance;
    if (summary.declared_sensitivity &&
        !(distance <= *summary.declared_sensitivity + options.sensitivity_tolerance)) {
      out.Add({ViolationKind::kSensitivityViolation, a.index, a.kind, RealToValue(distance),
               RealToValue(*summary.declared_sensitivity),
               MetricName(metric) + " distance " + Fmt(distance) +
                   " exceeds declared sensitivity " + Fmt(*summary.declared_sensitivity) +
                   shape_note});
    }
    CheckCalibration(a, options, out);
    report.trace_summary.push_back(std::move(summary));
  }
  // Calibration depends on the record run only, so calls past a stop count too.
  for (std::size_t i = aligned; i < t.entries.size(); ++i) {
    CheckCalibration(t.entries[i], options, out);
  }

  if (tp.stop_reason) {
    const StopReason& s = *tp.stop_reason;
    const std::size_t at = static_cast<std::size_t>(s.call_index);
    std::string kind;
    if (at >= 1 && at <= t.entries.size()) kind = t.entries[at - 1].kind;
    if (s.kind == StopKind::kControlFlowMismatch) {
      out.Add({ViolationKind::kControlFlowMismatch, s.call_index, kind, Value(nullptr),
               Value(nullptr), s.message});
    } else {
      Value recorded = at >= 1 && at <= t.entries.size() ? t.entries[at - 1].input
                                                         : Value(nullptr);
      out.Add({ViolationKind::kInvarianceViolation, s.call_index, kind, Value(s.message),
               recorded, s.message});
    }
  } else if (!t.rejection && !tp.rejection && tp.entries.size() < t.entries.size()) {
    const TraceEntry& missing = t.entries[tp.entries.size()];
    out.Add({ViolationKind::kControlFlowMismatch, missing.index, missing.kind,
             Value(static_cast<std::int64_t>(tp.entries.size())),
             Value(static_cast<std::int64_t>(t.entries.size())),
             "replay ended before recorded call " + std::to_string(missing.index)});
  }
  return report;
}

}  // namespace dpaudit
