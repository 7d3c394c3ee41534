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

// Runs corpus cases through the audits and assembles the detection matrix.

#ifndef DPAUDIT_RUNNER_H_
#define DPAUDIT_RUNNER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpaudit/blackbox.h"
#include "dpaudit/corpus.h"
#include "dpaudit/distaudit.h"
#include "dpaudit/recorder.h"
#include "dpaudit/validator.h"

namespace dpaudit {

enum class AuditMode { kRecordReplay, kDistributional, kBlackBox, kFull };

std::string AuditModeName(AuditMode m);
// Accepts "record-replay", "distributional", "blackbox" and "full".
AuditMode ParseAuditMode(const std::string& name);

inline constexpr int kReportSchemaVersion = 1;

struct CaseRunOptions {
  std::uint64_t seed = 0;
  // Empty selects the case's designated strategy.
  std::string strategy;
  // Unset fields fall back to the case's claimed values.
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<AdjacencyModel> adjacency;
  std::size_t samples = kDefaultAuditSamples;
  std::size_t blackbox_runs = 1000;
  AuditMode mode = AuditMode::kFull;
  ValidatorOptions validator;
};

struct CaseOutcome {
  PipelineCase spec;
  NeighborPair pair;
  TraceRun traces;
  std::optional<AuditReport> report;
  std::optional<AuditVerdict> verdict;
  std::optional<BlackBoxResult> blackbox;
  // Why the distributional audit did not run, when it was requested.
  std::optional<std::string> skipped;

  // Every finding from the audits that ran.
  std::vector<Violation> violations() const;
  bool flagged() const;
  bool Flags(ViolationKind k) const;
  Value ToJson() const;
  std::string ToText() const;
};

// Throws on unknown strategies or an adjacency the case cannot honor.
CaseOutcome RunCase(const PipelineCase& c, const CaseRunOptions& options);

struct MatrixRow {
  std::string name;
  Variant variant = Variant::kBuggy;
  std::optional<ViolationKind> expected;
  std::vector<ViolationKind> found;
  bool ok = false;
  std::string note;

  Value ToJson() const;
};

struct DetectionMatrix {
  std::vector<MatrixRow> rows;
  double seconds = 0;

  bool ok() const;
  Value ToJson() const;
  std::string ToText() const;
};

struct MatrixOptions {
  std::uint64_t seed = 0;
  std::size_t samples = kDefaultAuditSamples;
  // Record/replay only; buggy distributional cases are then not detectable.
  bool record_replay_only = false;
  std::string group = kDefaultGroup;
  ValidatorOptions validator;
};

// Buggy rows must be flagged with their expected kind by the designated
// audit; fixed rows must pass every audit.
DetectionMatrix RunMatrix(const MatrixOptions& options = {});

}  // namespace dpaudit

#endif  // DPAUDIT_RUNNER_H_
