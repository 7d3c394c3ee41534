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

#include "dpaudit/recorder.h"

#include <utility>

#include "dpaudit/errors.h"

namespace dpaudit {
namespace {

AuditorMode ParseMode(const std::string& s) {
  if (s == "RECORD") return AuditorMode::kRecord;
  if (s == "REPLAY") return AuditorMode::kReplay;
  throw ParseError("unknown trace mode '" + s + "'");
}

StopKind ParseStopKind(const std::string& s) {
  if (s == "ControlFlowMismatch") return StopKind::kControlFlowMismatch;
  if (s == "EqualityMismatch") return StopKind::kEqualityMismatch;
  throw ParseError("unknown stop reason '" + s + "'");
}

// Clears the nested-call flag on every exit path.
class CallScope {
 public:
  explicit CallScope(bool& flag) : flag_(flag) {
    if (flag_) throw NestedPrimitiveError("primitive invoked from inside another primitive");
    flag_ = true;
  }
  ~CallScope() { flag_ = false; }

 private:
  bool& flag_;
};

Value EntryToJson(const TraceEntry& e) {
  Value v{{"index", e.index},
          {"kind", e.kind},
          {"input", e.input},
          {"rng_digest", e.rng_digest}};
  v["spec"] = e.spec ? e.spec->ToJson() : Value(nullptr);
  v["params"] = e.params ? e.params->ToJson() : Value(nullptr);
  if (e.rng_state) v["rng_state"] = e.rng_state->ToHex();
  if (e.output) v["output"] = *e.output;
  return v;
}

TraceEntry EntryFromJson(const Value& v) {
  TraceEntry e;
  e.index = v.at("index").get<std::int64_t>();
  e.kind = v.at("kind").get<std::string>();
  e.input = v.at("input");
  e.rng_digest = v.at("rng_digest").get<std::string>();
  if (!v.at("spec").is_null()) e.spec = AuditSpec::FromJson(v.at("spec"));
  if (!v.at("params").is_null()) e.params = MechanismParams::FromJson(v.at("params"));
  if (v.contains("rng_state")) {
    e.rng_state = RngState::FromHex(v.at("rng_state").get<std::string>());
  }
  if (v.contains("output")) e.output = v.at("output");
  return e;
}

}  // namespace

std::string ModeName(AuditorMode m) {
  return m == AuditorMode::kRecord ? "RECORD" : "REPLAY";
}

std::string StopKindName(StopKind k) {
  return k == StopKind::kControlFlowMismatch ? "ControlFlowMismatch" : "EqualityMismatch";
}

Value Trace::ToJson() const {
  Value entries_json = Value::array();
  for (const TraceEntry& e : entries) entries_json.push_back(EntryToJson(e));
  Value v{{"version", version},
          {"mode", ModeName(mode)},
          {"seed", seed},
          {"pipeline", pipeline},
          {"entries", entries_json}};
  if (stop_reason) {
    v["stop_reason"] = {{"kind", StopKindName(stop_reason->kind)},
                        {"call_index", stop_reason->call_index},
                        {"message", stop_reason->message}};
  }
  if (rejection) v["rejection"] = *rejection;
  if (declared_budget) {
    v["declared_budget"] = {{"epsilon", RealToValue(declared_budget->epsilon)},
                            {"delta", RealToValue(declared_budget->delta)}};
  }
  return v;
}

Trace Trace::FromJson(const Value& v) {
  try {
    Trace t;
    t.version = v.at("version").get<int>();
    if (t.version != kTraceVersion) {
      throw ParseError("unsupported trace version " + std::to_string(t.version));
    }
    t.mode = ParseMode(v.at("mode").get<std::string>());
    t.seed = v.at("seed").get<std::uint64_t>();
    t.pipeline = v.at("pipeline").get<std::string>();
    for (const Value& e : v.at("entries")) t.entries.push_back(EntryFromJson(e));
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      if (t.entries[i].index != static_cast<std::int64_t>(i) + 1) {
        throw ParseError("trace entry indices must be contiguous from 1");
      }
    }
    if (v.contains("stop_reason")) {
      const Value& s = v.at("stop_reason");
      t.stop_reason = StopReason{ParseStopKind(s.at("kind").get<std::string>()),
                                 s.at("call_index").get<std::int64_t>(),
                                 s.at("message").get<std::string>()};
    }
    if (v.contains("rejection")) t.rejection = v.at("rejection").get<std::string>();
    if (v.contains("declared_budget")) {
      const Value& b = v.at("declared_budget");
      t.declared_budget =
          DeclaredBudget{ValueToReal(b.at("epsilon")), ValueToReal(b.at("delta"))};
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed trace: ") + e.what());
  } catch (const InvalidArgumentError& e) {
    throw ParseError(std::string("malformed trace: ") + e.what());
  }
}

std::string Trace::Serialize(int indent) const { return ToJson().dump(indent); }

Trace Trace::Parse(const std::string& text) {
  Value v;
  try {
    v = Value::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("trace is not valid JSON: ") + e.what());
  }
  return FromJson(v);
}

AuditContext::AuditContext(AuditorMode mode, std::uint64_t seed, std::string pipeline,
                           const Trace* reference)
    : mode_(mode), gen_(seed), reference_(reference) {
  if (mode == AuditorMode::kReplay && reference == nullptr) {
    throw InvalidArgumentError("REPLAY mode requires a reference trace");
  }
  trace_.mode = mode;
  trace_.seed = seed;
  trace_.pipeline = std::move(pipeline);
}

void AuditContext::Register(const PrimitivePtr& mech) {
  auto [it, inserted] = registry_.emplace(mech->spec().kind, mech);
  if (!inserted && Canonical(it->second->spec().ToJson()) !=
                       Canonical(mech->spec().ToJson())) {
    throw InvalidArgumentError("two primitives share the kind '" + mech->spec().kind +
                               "' with different audit specs");
  }
}

const TraceEntry& AuditContext::ExpectEntry(const std::string& kind) {
  const std::int64_t k = static_cast<std::int64_t>(trace_.entries.size()) + 1;
  if (k > static_cast<std::int64_t>(reference_->entries.size())) {
    throw ReplayStop({StopKind::kControlFlowMismatch, k,
                      "call " + std::to_string(k) + " (" + kind +
                          ") has no counterpart in the recorded trace"});
  }
  const TraceEntry& rec = reference_->entries[static_cast<std::size_t>(k - 1)];
  if (rec.kind != kind) {
    throw ReplayStop({StopKind::kControlFlowMismatch, k,
                      "call " + std::to_string(k) + " is " + kind +
                          " but the recorded trace has " + rec.kind});
  }
  return rec;
}

std::vector<double> AuditContext::Invoke(const PrimitivePtr& mech,
                                         const MechanismParams& params,
                                         std::span<const double> input) {
  if (!mech) throw InvalidArgumentError("null primitive");
  CallScope scope(in_call_);
  Register(mech);
  // Guarded primitives refuse bad input before anything is logged.
  mech->CheckCall(input, params);

  TraceEntry entry;
  entry.index = static_cast<std::int64_t>(trace_.entries.size()) + 1;
  entry.kind = mech->spec().kind;
  entry.spec = mech->spec();
  entry.params = params;
  entry.input = RealsToValue(input);

  if (mode_ == AuditorMode::kRecord) {
    std::vector<double> out = mech->Run(input, params, gen_);
    const RngState post = gen_.Snapshot();
    entry.rng_digest = post.DigestHex();
    entry.rng_state = post;
    entry.output = RealsToValue(out);
    trace_.entries.push_back(std::move(entry));
    return out;
  }

  const TraceEntry& rec = ExpectEntry(entry.kind);
  if (!rec.rng_state || !rec.output) {
    throw ParseError("recorded entry " + std::to_string(rec.index) +
                     " lacks the RNG state or output needed for replay");
  }
  gen_.Restore(*rec.rng_state);
  entry.rng_digest = gen_.Snapshot().DigestHex();
  trace_.entries.push_back(std::move(entry));
  return ValueToReals(*rec.output);
}

double AuditContext::InvokeScalar(const PrimitivePtr& mech, const MechanismParams& params,
                                  double x) {
  const double in[1] = {x};
  const std::vector<double> out = Invoke(mech, params, in);
  if (out.size() != 1) throw InvalidArgumentError("primitive did not return a scalar");
  return out[0];
}

Value AuditContext::EnsureEquality(const Value& q) {
  CallScope scope(in_call_);
  TraceEntry entry;
  entry.index = static_cast<std::int64_t>(trace_.entries.size()) + 1;
  entry.kind = kEnsureEqualityKind;
  entry.input = q;

  if (mode_ == AuditorMode::kRecord) {
    const RngState state = gen_.Snapshot();
    entry.rng_digest = state.DigestHex();
    entry.rng_state = state;
    entry.output = q;
    trace_.entries.push_back(std::move(entry));
    return q;
  }

  const TraceEntry& rec = ExpectEntry(entry.kind);
  if (!BitwiseEqual(rec.input, q)) {
    throw ReplayStop({StopKind::kEqualityMismatch, entry.index,
                      "ensure_equality at call " + std::to_string(entry.index) +
                          ": recorded " + Canonical(rec.input) + ", replay " +
                          Canonical(q)});
  }
  if (rec.rng_state) gen_.Restore(*rec.rng_state);
  entry.rng_digest = gen_.Snapshot().DigestHex();
  trace_.entries.push_back(std::move(entry));
  return q;
}

void AuditContext::DeclareSpent(double epsilon, double delta) {
  trace_.declared_budget = DeclaredBudget{epsilon, delta};
}

TraceRun GenerateTraces(const Pipeline& pipeline, const std::string& name,
                        const TabularDataset& d, const TabularDataset& dp,
                        double epsilon, std::uint64_t seed) {
  TraceRun run;

  AuditContext record(AuditorMode::kRecord, seed, name);
  try {
    run.record_output = pipeline(d, epsilon, record);
  } catch (const InputDomainError& e) {
    record.mutable_trace().rejection = e.what();
  }
  run.record = record.trace();

  AuditContext replay(AuditorMode::kReplay, seed, name, &run.record);
  try {
    run.replay_output = pipeline(dp, epsilon, replay);
  } catch (const ReplayStop& stop) {
    replay.mutable_trace().stop_reason = stop.reason();
  } catch (const InputDomainError& e) {
    replay.mutable_trace().rejection = e.what();
  }
  run.replay = replay.trace();

  run.registry = record.registry();
  for (const auto& [kind, mech] : replay.registry()) run.registry.emplace(kind, mech);
  return run;
}

}  // namespace dpaudit
