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

// Distributional audit of a recorded trace pair.
//
// Each aligned primitive call contributes one privacy loss distribution:
// the analytic one for trusted primitives, evaluated at the input shift the
// traces actually show, or an empirical one built by sampling the primitive
// on both recorded inputs. The per-call PLDs are composed and the result is
// compared against the claimed epsilon.

#ifndef DPAUDIT_DISTAUDIT_H_
#define DPAUDIT_DISTAUDIT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpaudit/accountant.h"
#include "dpaudit/mechanisms.h"
#include "dpaudit/recorder.h"
#include "dpaudit/tradeoff.h"
#include "dpaudit/validator.h"

namespace dpaudit {

// Child-generator streams used while sampling.
inline constexpr std::uint64_t kStreamD = 0;
inline constexpr std::uint64_t kStreamDp = 1;

// N independent runs of `mech` on the fixed input q. Replicate r draws from
// Generator::Derive(seed, call_index, r, stream).
OutputSamples SampleOutputs(const Primitive& mech, std::span<const double> q,
                            const MechanismParams& params, std::size_t n,
                            std::uint64_t seed, std::uint64_t call_index = 0,
                            std::uint64_t stream = kStreamD);

struct SamplePair {
  OutputSamples outputs_d;
  OutputSamples outputs_dp;
  std::string kind;
  std::int64_t call_index = 0;
};

// Empirical PLD of one sampled call: both orientations are estimated and
// the pointwise larger profile is reconstructed.
DiscretePld EmpiricalPld(const SamplePair& samples, OutputKind kind,
                         const TradeoffOptions& options = {},
                         double grid_step = kDefaultGridStep);

// Analytic PLD of a trusted call at the measured input shift.
DiscretePld AnalyticCallPld(AnalyticAccountant accountant, std::span<const double> q_d,
                            std::span<const double> q_dp, double scale,
                            double grid_step = kDefaultGridStep);

inline constexpr double kDefaultAuditDelta = 1e-6;
inline constexpr std::size_t kDefaultAuditSamples = 100000;
// A declared budget more than this factor above the audited epsilon is
// reported as an accounting discrepancy.
inline constexpr double kAccountingSlackFactor = 10.0;

struct DistAuditOptions {
  std::size_t samples = kDefaultAuditSamples;
  double delta = kDefaultAuditDelta;
  double eps_claimed = 1.0;
  std::uint64_t seed = 0;
  double grid_step = kDefaultGridStep;
  // Sample trusted primitives too instead of using their analytic PLD.
  bool force_empirical = false;
  double accounting_factor = kAccountingSlackFactor;
  TradeoffOptions tradeoff;
};

struct CallPldRecord {
  std::int64_t index = 0;
  std::string kind;
  // "analytic" or "empirical".
  std::string source;
  double eps_at_delta = 0;
  DiscretePld pld = DiscretePld::Identity();
};

struct AuditVerdict {
  double eps_hat = 0;
  double eps_claimed = 0;
  double delta = 0;
  // Upward rounding the loss grid may add: one grid step per discretized
  // piece (Laplace coordinate or call) in the composition.
  double rounding_slack = 0;
  bool pass = true;  // eps_hat <= eps_claimed + rounding_slack
  std::vector<CallPldRecord> per_call;
  // AccountingDiscrepancy findings.
  std::vector<Violation> violations;
  std::optional<std::string> rejection;

  bool clean() const { return pass && violations.empty(); }
  Value ToJson() const;
};

// Throws InvalidArgumentError for a stopped trace pair or a primitive kind
// missing from `registry` when it has to be sampled.
AuditVerdict DistributionalAudit(const Trace& t, const Trace& tp,
                                 const PrimitiveRegistry& registry,
                                 const DistAuditOptions& options = {});

}  // namespace dpaudit

#endif  // DPAUDIT_DISTAUDIT_H_
