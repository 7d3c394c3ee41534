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

#include <string>

#include "doctest.h"
#include "dpaudit/errors.h"
#include "dpaudit/runner.h"

namespace dpaudit {
namespace {

CaseRunOptions Options(AuditMode mode, std::uint64_t seed = 5) {
  CaseRunOptions o;
  o.seed = seed;
  o.mode = mode;
  o.samples = 20000;
  return o;
}

TEST_CASE("audit mode names parse back") {
  for (AuditMode m : {AuditMode::kRecordReplay, AuditMode::kDistributional,
                      AuditMode::kBlackBox, AuditMode::kFull}) {
    CHECK(ParseAuditMode(AuditModeName(m)) == m);
  }
  CHECK_THROWS_AS(ParseAuditMode("oracle"), ParseError);
}

TEST_CASE("modes run exactly the requested audits") {
  const PipelineCase c = MakeCase("scaled_count", Variant::kFixed);
  const CaseOutcome rr = RunCase(c, Options(AuditMode::kRecordReplay));
  CHECK(rr.report.has_value());
  CHECK_FALSE(rr.verdict.has_value());
  CHECK_FALSE(rr.blackbox.has_value());
  const CaseOutcome dist = RunCase(c, Options(AuditMode::kDistributional));
  CHECK_FALSE(dist.report.has_value());
  CHECK(dist.verdict.has_value());
  const CaseOutcome full = RunCase(c, Options(AuditMode::kFull));
  CHECK(full.report.has_value());
  CHECK(full.verdict.has_value());
  CHECK(full.blackbox.has_value());
  CHECK_FALSE(full.flagged());
  const Value j = full.ToJson();
  CHECK(j.at("schema_version").get<int>() == kReportSchemaVersion);
  CHECK(j.at("verdict").get<std::string>() == "pass");
  CHECK(j.at("skipped").is_null());
}

TEST_CASE("a stopped replay skips the distributional audit") {
  const PipelineCase c = MakeCase("privbayes_lite", Variant::kBuggy);
  const CaseOutcome o = RunCase(c, Options(AuditMode::kDistributional));
  CHECK(o.skipped.has_value());
  CHECK_FALSE(o.verdict.has_value());
  REQUIRE(o.report.has_value());
  CHECK(o.Flags(ViolationKind::kInvarianceViolation));
}

TEST_CASE("claimed budgets and strategies can be overridden") {
  const PipelineCase c = MakeCase("double_spend", Variant::kBuggy);
  CaseRunOptions o = Options(AuditMode::kDistributional);
  o.epsilon = 2.5;
  const CaseOutcome larger = RunCase(c, o);
  CHECK(larger.spec.claimed_epsilon == 2.5);
  REQUIRE(larger.verdict.has_value());
  CHECK(larger.verdict->eps_claimed == 2.5);
  // The pipeline spends the claimed budget twice.
  CHECK(larger.verdict->eps_hat == doctest::Approx(5.0).epsilon(0.01));

  o.strategy = "remove_random";
  CHECK(RunCase(c, o).pair.dp.size() + 1 == RunCase(c, o).pair.d.size());

  CaseRunOptions crafted = Options(AuditMode::kRecordReplay);
  crafted.adjacency = AdjacencyModel::kAddRemove;
  CHECK_THROWS_AS(RunCase(MakeCase("jam_lite", Variant::kBuggy), crafted),
                  InvalidArgumentError);
}

TEST_CASE("a black-box bound above the claim is a finding") {
  // Releases the exact count, so the pair is separated outright.
  PipelineCase c = MakeCase("scaled_count", Variant::kBuggy);
  c.pipeline = [](const TabularDataset& d, double, AuditContext&) {
    return Value::array({static_cast<double>(d.size())});
  };
  const CaseOutcome out = RunCase(c, Options(AuditMode::kBlackBox));
  REQUIRE(out.blackbox.has_value());
  CHECK(out.blackbox->eps_lower > c.claimed_epsilon);
  CHECK(out.Flags(ViolationKind::kAccountingDiscrepancy));
}

TEST_CASE("the detection matrix matches in full and lists every row") {
  const DetectionMatrix m = RunMatrix();
  CHECK(m.ok());
  CHECK(m.rows.size() == 18);
  CHECK(m.ToText().find("18/18 rows match") != std::string::npos);

  MatrixOptions rr;
  rr.record_replay_only = true;
  const DetectionMatrix structural = RunMatrix(rr);
  CHECK(structural.seconds < 10.0);
  for (const MatrixRow& r : structural.rows) {
    const PipelineCase c = MakeCase(r.name, r.variant);
    if (c.audit == DesignatedAudit::kRecordReplay || r.variant == Variant::kFixed) {
      CAPTURE(r.name);
      CHECK(r.ok);
    }
  }

  MatrixOptions path;
  path.group = kPathologicalGroup;
  const DetectionMatrix pathological = RunMatrix(path);
  CHECK(pathological.rows.size() == 2);
  CHECK(pathological.ok());
}

}  // namespace
}  // namespace dpaudit
