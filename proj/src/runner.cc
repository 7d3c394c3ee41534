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

#include "dpaudit/runner.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "dpaudit/errors.h"

namespace dpaudit {
namespace {

bool Contains(const std::vector<ViolationKind>& kinds, ViolationKind k) {
  return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

std::vector<ViolationKind> Kinds(const std::vector<Violation>& vs) {
  std::vector<ViolationKind> out;
  for (const Violation& v : vs) {
    if (!Contains(out, v.kind)) out.push_back(v.kind);
  }
  return out;
}

// One pipeline run in RECORD mode; the first output coordinate is the
// observable. A guarded rejection shows up as NaN.
BlackBoxMechanism AsBlackBox(const PipelineCase& c, double epsilon) {
  return [pipeline = c.pipeline, name = c.name, epsilon](const TabularDataset& d,
                                                          std::uint64_t run_seed) {
    AuditContext ctx(AuditorMode::kRecord, run_seed, name, nullptr);
    try {
      const std::vector<double> out = ValueToReals(pipeline(d, epsilon, ctx));
      return std::vector<double>{out.empty() ? 0.0 : out.front()};
    } catch (const InputDomainError&) {
      return std::vector<double>{std::numeric_limits<double>::quiet_NaN()};
    }
  };
}

}  // namespace

std::string AuditModeName(AuditMode m) {
  switch (m) {
    case AuditMode::kRecordReplay: return "record-replay";
    case AuditMode::kDistributional: return "distributional";
    case AuditMode::kBlackBox: return "blackbox";
    case AuditMode::kFull: return "full";
  }
  return "full";
}

AuditMode ParseAuditMode(const std::string& name) {
  for (AuditMode m : {AuditMode::kRecordReplay, AuditMode::kDistributional,
                      AuditMode::kBlackBox, AuditMode::kFull}) {
    if (AuditModeName(m) == name) return m;
  }
  throw ParseError("unknown audit mode '" + name + "'");
}

std::vector<Violation> CaseOutcome::violations() const {
  std::vector<Violation> out;
  if (report) out.insert(out.end(), report->violations.begin(), report->violations.end());
  if (verdict) out.insert(out.end(), verdict->violations.begin(), verdict->violations.end());
  if (blackbox && blackbox->eps_lower > spec.claimed_epsilon) {
    out.push_back({ViolationKind::kAccountingDiscrepancy, std::nullopt, "",
                   RealToValue(blackbox->eps_lower), RealToValue(spec.claimed_epsilon),
                   "black-box lower bound " + FormatReal(blackbox->eps_lower) +
                       " exceeds the claimed epsilon"});
  }
  return out;
}

bool CaseOutcome::flagged() const { return !violations().empty(); }

bool CaseOutcome::Flags(ViolationKind k) const { return Contains(Kinds(violations()), k); }

Value CaseOutcome::ToJson() const {
  Value v{{"schema_version", kReportSchemaVersion},
          {"case", spec.Manifest()},
          {"verdict", flagged() ? "fail" : "pass"}};
  Value vs = Value::array();
  for (const Violation& x : violations()) vs.push_back(x.ToJson());
  v["violations"] = vs;
  v["record_replay"] = report ? report->ToJson() : Value(nullptr);
  v["distributional"] = verdict ? verdict->ToJson() : Value(nullptr);
  v["blackbox"] = blackbox ? blackbox->ToJson() : Value(nullptr);
  v["skipped"] = skipped ? Value(*skipped) : Value(nullptr);
  return v;
}

std::string CaseOutcome::ToText() const {
  std::ostringstream out;
  out << "pipeline " << spec.name << " (" << VariantName(spec.variant) << ", "
      << AdjacencyName(spec.adjacency) << ", strategy " << spec.strategy << ")\n";
  if (report) out << report->ToText();
  if (verdict) {
    out << "distributional: eps_hat " << FormatReal(verdict->eps_hat) << " at delta "
        << FormatReal(verdict->delta) << ", claimed " << FormatReal(verdict->eps_claimed)
        << "\n";
    for (const Violation& v : verdict->violations) {
      out << ViolationKindName(v.kind) << ": " << v.message << "\n";
    }
  }
  if (skipped) out << "distributional audit skipped: " << *skipped << "\n";
  if (blackbox) {
    out << "blackbox: eps_lower " << FormatReal(blackbox->eps_lower);
    if (blackbox->warning) out << " (" << *blackbox->warning << ")";
    out << "\n";
  }
  out << "overall: " << (flagged() ? "fail" : "pass") << "\n";
  return out.str();
}

CaseOutcome RunCase(const PipelineCase& c, const CaseRunOptions& options) {
  CaseOutcome o;
  o.spec = c;
  if (!options.strategy.empty()) o.spec.strategy = options.strategy;
  if (options.adjacency) o.spec.adjacency = *options.adjacency;
  if (o.spec.strategy == kCraftedStrategy && o.spec.adjacency != c.adjacency) {
    throw InvalidArgumentError("the crafted pair of '" + c.name + "' is " +
                               AdjacencyName(c.adjacency));
  }
  if (options.epsilon) o.spec.claimed_epsilon = *options.epsilon;
  if (options.delta) o.spec.claimed_delta = *options.delta;

  o.pair = o.spec.MakePair(o.spec.strategy, options.seed);
  o.traces = GenerateTraces(o.spec.pipeline, o.spec.name, o.pair.d, o.pair.dp,
                            o.spec.claimed_epsilon, options.seed);

  const AuditMode mode = options.mode;
  if (mode == AuditMode::kRecordReplay || mode == AuditMode::kFull) {
    o.report = ValidateRecords(o.traces.record, o.traces.replay, options.validator);
  }
  if (mode == AuditMode::kDistributional || mode == AuditMode::kFull) {
    if (o.traces.replay.stop_reason) {
      o.skipped = "replay stopped: " + o.traces.replay.stop_reason->message;
      if (!o.report) {
        o.report = ValidateRecords(o.traces.record, o.traces.replay, options.validator);
      }
    } else {
      DistAuditOptions d;
      d.samples = options.samples;
      d.delta = o.spec.claimed_delta;
      d.eps_claimed = o.spec.claimed_epsilon;
      d.seed = options.seed;
      o.verdict = DistributionalAudit(o.traces.record, o.traces.replay, o.traces.registry, d);
    }
  }
  if (mode == AuditMode::kBlackBox || mode == AuditMode::kFull) {
    BlackBoxOptions b;
    b.runs = options.blackbox_runs;
    b.delta = 0.0;
    b.seed = options.seed;
    o.blackbox = BlackBoxAudit(AsBlackBox(o.spec, o.spec.claimed_epsilon), o.pair.d, o.pair.dp, b);
  }
  return o;
}

Value MatrixRow::ToJson() const {
  Value f = Value::array();
  for (ViolationKind k : found) f.push_back(ViolationKindName(k));
  return Value{{"name", name},
               {"variant", VariantName(variant)},
               {"expected", expected ? Value(ViolationKindName(*expected)) : Value(nullptr)},
               {"found", f},
               {"ok", ok},
               {"note", note}};
}

bool DetectionMatrix::ok() const {
  return !rows.empty() &&
         std::all_of(rows.begin(), rows.end(), [](const MatrixRow& r) { return r.ok; });
}

Value DetectionMatrix::ToJson() const {
  Value rs = Value::array();
  for (const MatrixRow& r : rows) rs.push_back(r.ToJson());
  const auto passed = std::count_if(rows.begin(), rows.end(), [](const MatrixRow& r) { return r.ok; });
  return Value{{"schema_version", kReportSchemaVersion},
               {"rows", rs},
               {"matched", passed},
               {"total", rows.size()},
               {"ok", ok()}};
}

std::string DetectionMatrix::ToText() const {
  std::ostringstream out;
  char line[200];
  std::snprintf(line, sizeof(line), "%-20s %-6s %-24s %-24s %s\n", "pipeline", "variant",
                "expected", "found", "match");
  out << line;
  std::size_t matched = 0;
  for (const MatrixRow& r : rows) {
    std::string found;
    for (ViolationKind k : r.found) found += (found.empty() ? "" : ",") + ViolationKindName(k);
    std::snprintf(line, sizeof(line), "%-20s %-6s %-24s %-24s %s\n", r.name.c_str(),
                  VariantName(r.variant).c_str(),
                  r.expected ? ViolationKindName(*r.expected).c_str() : "-",
                  found.empty() ? "-" : found.c_str(), r.ok ? "yes" : "NO");
    out << line;
    if (r.ok) ++matched;
  }
  out << matched << "/" << rows.size() << " rows match\n";
  return out.str();
}

DetectionMatrix RunMatrix(const MatrixOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  DetectionMatrix m;
  for (const PipelineCase& c : AllCases()) {
    if (c.group != options.group) continue;
    MatrixRow row;
    row.name = c.name;
    row.variant = c.variant;
    row.expected = c.expected_violation;

    CaseRunOptions run;
    run.seed = options.seed;
    run.samples = options.samples;
    run.validator = options.validator;
    if (options.record_replay_only) {
      run.mode = AuditMode::kRecordReplay;
    } else if (c.variant == Variant::kBuggy) {
      run.mode = c.audit == DesignatedAudit::kRecordReplay ? AuditMode::kRecordReplay
                                                           : AuditMode::kDistributional;
    } else {
      run.mode = AuditMode::kFull;
    }
    // The black-box game is a baseline, not part of the matrix.
    if (run.mode == AuditMode::kFull) run.mode = AuditMode::kDistributional;
    try {
      CaseRunOptions rr = run;
      if (c.variant == Variant::kFixed && !options.record_replay_only) {
        rr.mode = AuditMode::kRecordReplay;
        const CaseOutcome first = RunCase(c, rr);
        for (ViolationKind k : Kinds(first.violations())) row.found.push_back(k);
      }
      const CaseOutcome o = RunCase(c, run);
      for (ViolationKind k : Kinds(o.violations())) {
        if (!Contains(row.found, k)) row.found.push_back(k);
      }
      if (o.skipped) row.note = *o.skipped;
    } catch (const std::exception& e) {
      row.note = std::string("error: ") + e.what();
      m.rows.push_back(row);
      continue;
    }
    if (c.expected_violation) {
      row.ok = Contains(row.found, *c.expected_violation);
    } else {
      row.ok = row.found.empty();
    }
    m.rows.push_back(row);
  }
  m.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return m;
}

}  // namespace dpaudit
