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

// Record/replay tracing of privacy primitive calls.
//
// A pipeline runs twice with the same seed. The RECORD run on D logs every
// primitive call: kind, parameters, sensitive input, the generator state
// after the call and the output. The REPLAY run on D' checks that the same
// calls happen in the same order, logs the D' inputs, hands back the outputs
// frozen from the D run and rewinds the generator to the recorded post-call
// state. Any difference between the two logs is then attributable to the
// data, not to noise.

#ifndef DPAUDIT_RECORDER_H_
#define DPAUDIT_RECORDER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpaudit/mechanisms.h"
#include "dpaudit/neighbors.h"
#include "dpaudit/rng.h"
#include "dpaudit/value.h"

namespace dpaudit {

inline constexpr int kTraceVersion = 1;

enum class AuditorMode { kRecord, kReplay };

std::string ModeName(AuditorMode m);

enum class StopKind { kControlFlowMismatch, kEqualityMismatch };

std::string StopKindName(StopKind k);

struct StopReason {
  StopKind kind;
  std::int64_t call_index;
  std::string message;

  friend bool operator==(const StopReason&, const StopReason&) = default;
};

struct TraceEntry {
  std::int64_t index = 0;
  std::string kind;
  // Absent for ensure_equality entries.
  std::optional<AuditSpec> spec;
  std::optional<MechanismParams> params;
  Value input;
  // Digest of the generator state after the call.
  std::string rng_digest;
  // RECORD only.
  std::optional<RngState> rng_state;
  std::optional<Value> output;

  bool is_equality_check() const { return kind == kEnsureEqualityKind; }
};

struct DeclaredBudget {
  double epsilon = 0;
  double delta = 0;
};

struct Trace {
  int version = kTraceVersion;
  AuditorMode mode = AuditorMode::kRecord;
  std::uint64_t seed = 0;
  std::string pipeline;
  std::vector<TraceEntry> entries;
  std::optional<StopReason> stop_reason;
  // Message of a guarded primitive that refused its input; the run ended
  // there without spending budget.
  std::optional<std::string> rejection;
  // Budget the pipeline's own accounting reports having spent.
  std::optional<DeclaredBudget> declared_budget;

  Value ToJson() const;
  static Trace FromJson(const Value& v);
  // Sorted-key JSON text; Parse(Serialize()) reproduces the trace exactly.
  std::string Serialize(int indent = -1) const;
  static Trace Parse(const std::string& text);
};

using PrimitiveRegistry = std::map<std::string, PrimitivePtr>;

// Raised inside a replayed pipeline to unwind it; GenerateTraces catches it.
class ReplayStop : public std::exception {
 public:
  explicit ReplayStop(StopReason reason) : reason_(std::move(reason)) {}
  const StopReason& reason() const { return reason_; }
  const char* what() const noexcept override { return reason_.message.c_str(); }

 private:
  StopReason reason_;
};

class AuditContext {
 public:
  // REPLAY requires `reference`, which must outlive the context.
  AuditContext(AuditorMode mode, std::uint64_t seed, std::string pipeline,
               const Trace* reference = nullptr);

  AuditorMode mode() const { return mode_; }
  // Randomness the pipeline draws itself must come from here.
  Generator& generator() { return gen_; }

  // Routes one primitive call through the auditor.
  std::vector<double> Invoke(const PrimitivePtr& mech, const MechanismParams& params,
                             std::span<const double> input);
  double InvokeScalar(const PrimitivePtr& mech, const MechanismParams& params, double x);

  // Asserts that a data-derived value is invariant across the two runs.
  // Returns q in both modes; REPLAY stops when q differs from the recorded value.
  Value EnsureEquality(const Value& q);
  template <typename T>
  T EnsureEqual(const T& q) {
    return EnsureEquality(Value(q)).template get<T>();
  }

  void DeclareSpent(double epsilon, double delta);

  const Trace& trace() const { return trace_; }
  Trace& mutable_trace() { return trace_; }
  const PrimitiveRegistry& registry() const { return registry_; }

 private:
  const TraceEntry& ExpectEntry(const std::string& kind);
  void Register(const PrimitivePtr& mech);

  AuditorMode mode_;
  Generator gen_;
  const Trace* reference_;
  Trace trace_;
  PrimitiveRegistry registry_;
  bool in_call_ = false;
};

using Pipeline =
    std::function<Value(const TabularDataset& data, double epsilon, AuditContext& ctx)>;

struct TraceRun {
  Trace record;
  Trace replay;
  // Pipeline results; absent when the run stopped or was rejected.
  std::optional<Value> record_output;
  std::optional<Value> replay_output;
  PrimitiveRegistry registry;
};

// Runs `pipeline` on D in RECORD mode, then on D' in REPLAY mode, reseeding
// the generator identically before each phase.
TraceRun GenerateTraces(const Pipeline& pipeline, const std::string& name,
                        const TabularDataset& d, const TabularDataset& dp,
                        double epsilon, std::uint64_t seed);

}  // namespace dpaudit

#endif  // DPAUDIT_RECORDER_H_
