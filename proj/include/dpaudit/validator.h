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

// Checks over a (RECORD, REPLAY) trace pair. Everything here is a pure
// function of the two traces, so every flag can be reproduced from the
// trace files alone.

#ifndef DPAUDIT_VALIDATOR_H_
#define DPAUDIT_VALIDATOR_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dpaudit/mechanisms.h"
#include "dpaudit/recorder.h"
#include "dpaudit/value.h"

namespace dpaudit {

enum class ViolationKind {
  kControlFlowMismatch,
  kInvarianceViolation,
  kSensitivityViolation,
  kNoiseMiscalibration,
  kAccountingDiscrepancy,
  kInputDomainViolation,
};

std::string ViolationKindName(ViolationKind k);
ViolationKind ParseViolationKind(const std::string& name);

struct Violation {
  ViolationKind kind;
  // Absent for whole-pipeline findings.
  std::optional<std::int64_t> call_index;
  // Primitive kind at call_index, when there is one.
  std::string primitive;
  Value measured;
  Value declared;
  std::string message;

  Value ToJson() const;
};

struct CallSummary {
  std::int64_t index = 0;
  std::string kind;
  std::string metric;
  std::optional<double> distance;
  std::optional<double> declared_sensitivity;

  Value ToJson() const;
};

struct AuditReport {
  std::vector<Violation> violations;
  std::vector<CallSummary> trace_summary;
  // Set when a guarded primitive refused its input.
  std::optional<std::string> rejection;

  bool passed() const { return violations.empty(); }
  std::string verdict() const { return passed() ? "pass" : "fail"; }
  bool Has(ViolationKind k) const;

  Value ToJson() const;
  std::string ToText() const;
};

inline constexpr double kSensitivityTolerance = 1e-9;
inline constexpr double kScaleRelativeTolerance = 1e-9;

struct ValidatorOptions {
  // Checks to skip; used to confirm that each check is what catches its bug.
  std::set<ViolationKind> disabled;
  double sensitivity_tolerance = kSensitivityTolerance;
  double scale_tolerance = kScaleRelativeTolerance;
};

// Throws InvalidArgumentError when the traces belong to different pipelines
// or are not a (RECORD, REPLAY) pair.
AuditReport ValidateRecords(const Trace& t, const Trace& tp,
                            const ValidatorOptions& options = {});

// Metric distance between equal-shape operands. ValueDistance takes
// serialized inputs (a real or an array of reals). NaN anywhere gives +inf;
// matching infinities contribute zero. Throws InvalidArgumentError on a
// shape mismatch.
double EmpiricalDistance(std::span<const double> a, std::span<const double> b, Metric m);
double ValueDistance(const Value& a, const Value& b, Metric m);

// Noise scale implied by the declared (epsilon, delta, sensitivity) under a
// trusted accountant; nullopt when no finite scale satisfies the claim.
std::optional<double> ImpliedNoiseScale(AnalyticAccountant a, const MechanismParams& p);
// Scale the sampler used: the explicit one, else the implied one.
std::optional<double> RealizedNoiseScale(AnalyticAccountant a, const MechanismParams& p);

}  // namespace dpaudit

#endif  // DPAUDIT_VALIDATOR_H_
