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

#include "doctest.h"

#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "dpaudit/accountant.h"
#include "dpaudit/corpus.h"
#include "dpaudit/distaudit.h"
#include "dpaudit/errors.h"
#include "dpaudit/recorder.h"
#include "dpaudit/validator.h"
#include "oracles.h"

namespace dpaudit {
namespace {

constexpr std::uint64_t kSeed = 17;

struct Audited {
  TraceRun run;
  AuditReport report;
};

Audited Audit(const PipelineCase& c, const NeighborPair& pair, std::uint64_t seed = kSeed) {
  Audited a{GenerateTraces(c.pipeline, c.name, pair.d, pair.dp, c.claimed_epsilon, seed), {}};
  a.report = ValidateRecords(a.run.record, a.run.replay);
  return a;
}

Audited Audit(const std::string& name, Variant v, const NeighborPair& pair,
              const CaseOptions& o = {}) {
  return Audit(MakeCase(name, v, o), pair);
}

Audited AuditDesignated(const std::string& name, Variant v, const CaseOptions& o = {}) {
  const PipelineCase c = MakeCase(name, v, o);
  return Audit(c, c.DesignatedPair(kSeed));
}

Audited AuditStrategy(const std::string& name, Variant v, const std::string& strategy) {
  const PipelineCase c = MakeCase(name, v);
  return Audit(c, c.MakePair(strategy, kSeed));
}

AuditVerdict Distributional(const PipelineCase& c, const TraceRun& run) {
  DistAuditOptions o;
  o.eps_claimed = c.claimed_epsilon;
  o.delta = c.claimed_delta;
  o.seed = kSeed;
  return DistributionalAudit(run.record, run.replay, run.registry, o);
}

const Violation* Find(const AuditReport& r, ViolationKind k) {
  for (const Violation& v : r.violations) {
    if (v.kind == k) return &v;
  }
  return nullptr;
}

TabularDataset Values(std::vector<double> xs) {
  return TabularDataset({{"x", ColumnType::kCategorical, 0.0, 1.0}}, [&] {
    std::vector<Row> rows;
    for (double x : xs) rows.push_back({x});
    return rows;
  }());
}

TEST_CASE("registry lists nine paired cases plus the pathological one") {
  const std::vector<std::string>& names = CaseNames();
  CHECK(names.size() == 10);
  const std::vector<PipelineCase> all = AllCases();
  CHECK(all.size() == 20);
  int table = 0;
  for (const PipelineCase& c : all) {
    CAPTURE(c.name);
    if (c.group == kDefaultGroup) ++table;
    if (c.variant == Variant::kBuggy) {
      CHECK(c.expected_violation.has_value());
    } else {
      CHECK_FALSE(c.expected_violation.has_value());
    }
    CHECK(c.extra_strategies.size() == 3);
    const Value m = c.Manifest();
    for (const char* key : {"name", "variant", "expected_violation", "adjacency", "strategy"}) {
      CHECK(m.contains(key));
    }
  }
  CHECK(table == 18);
  CHECK_THROWS_AS(MakeCase("no_such_case", Variant::kBuggy), InvalidArgumentError);
  CHECK(ParseVariant("fixed") == Variant::kFixed);
  CHECK_THROWS(ParseVariant("broken"));
}

TEST_CASE("every case's strategies yield adjacent pairs") {
  for (const PipelineCase& c : AllCases()) {
    CAPTURE(c.name);
    const NeighborPair p = c.DesignatedPair(kSeed);
    CHECK(IsAdjacent(p.d, p.dp, c.adjacency));
    for (const std::string& s : c.extra_strategies) {
      const NeighborPair q = c.MakePair(s, kSeed);
      CHECK(IsAdjacent(q.d, q.dp, c.adjacency));
    }
  }
}

TEST_CASE("scaled count: measured distance 2 against declared 1") {
  const NeighborPair fig{Values({0, 0, 0}), Values({0, 0, 0, 0})};
  const Audited buggy = Audit("scaled_count", Variant::kBuggy, fig);
  const Violation* v = Find(buggy.report, ViolationKind::kSensitivityViolation);
  REQUIRE(v != nullptr);
  CHECK(ValueToReal(v->measured) == 2.0);
  CHECK(ValueToReal(v->declared) == 1.0);
  CHECK(v->call_index == 1);
  CHECK(Audit("scaled_count", Variant::kFixed, fig).report.passed());
  CHECK(Audit("scaled_count", Variant::kBuggy, {fig.d, fig.d}).report.passed());
}

TEST_CASE("covariance release: raw outliers escape the clipping") {
  const PipelineCase c = MakeCase("covariance_release", Variant::kBuggy);
  const TabularDataset d = c.base_dataset(kSeed);
  TabularDataset outlier = d;
  outlier.AddRow({1e6, 1e6});
  const Audited buggy = Audit("covariance_release", Variant::kBuggy, {d, outlier});
  const Violation* v = Find(buggy.report, ViolationKind::kSensitivityViolation);
  REQUIRE(v != nullptr);
  CHECK(ValueToReal(v->measured) > 1e11);
  CHECK(Audit("covariance_release", Variant::kFixed, {d, outlier}).report.passed());
  TabularDataset benign = d;
  benign.AddRow({0.5, 0.5});
  CHECK(Audit("covariance_release", Variant::kBuggy, {d, benign}).report.passed());
}

TEST_CASE("privbayes lite: the private branch and the zero noise scale") {
  const Audited branch = AuditDesignated("privbayes_lite", Variant::kBuggy);
  CHECK(branch.report.Has(ViolationKind::kInvarianceViolation));

  CaseOptions full;
  full.privbayes_k = 2;
  const PipelineCase c = MakeCase("privbayes_lite", Variant::kBuggy, full);
  const TabularDataset d = c.base_dataset(0);
  TabularDataset dp = d;
  dp.ReplaceRow(0, {1, 1});  // still perfectly correlated: no branch flip
  const Audited zero = Audit(c, {d, dp});
  CHECK(zero.report.Has(ViolationKind::kNoiseMiscalibration));
  CHECK_FALSE(zero.report.Has(ViolationKind::kInvarianceViolation));
  CHECK(Distributional(c, zero.run).eps_hat > 10 * c.claimed_epsilon);

  for (const CaseOptions& o : {CaseOptions{}, full}) {
    const PipelineCase f = MakeCase("privbayes_lite", Variant::kFixed, o);
    const Audited a = Audit(f, f.DesignatedPair(kSeed));
    CHECK(a.report.passed());
    CHECK(Distributional(f, a.run).clean());
  }
}

TEST_CASE("odometer: the missing log inflates the reported budget") {
  const double buggy = BuggyAdvancedCompositionEpsilon(0.1, 10, 1e-6);
  const double correct = AdvancedCompositionEpsilon(0.1, 0.0, 10, 1e-6);
  CHECK(buggy == doctest::Approx(oracle::AdvancedCompositionMissingLog(0.1, 10, 1e-6)));
  CHECK(correct == doctest::Approx(oracle::AdvancedComposition(0.1, 10, 1e-6)));
  CHECK(buggy / correct >= 100);

  const PipelineCase b = MakeCase("odometer", Variant::kBuggy);
  const AuditVerdict vb = Distributional(b, Audit(b, b.DesignatedPair(kSeed)).run);
  CHECK_FALSE(vb.violations.empty());
  // Loose, not leaky: the queries themselves stay within the correct bound.
  const PipelineCase f = MakeCase("odometer", Variant::kFixed);
  const AuditVerdict vf = Distributional(f, Audit(f, f.DesignatedPair(kSeed)).run);
  CHECK(vf.clean());
  CHECK(vb.eps_hat <= correct);

  CaseOptions single;
  single.odometer_queries = 1;
  for (Variant v : {Variant::kBuggy, Variant::kFixed}) {
    const PipelineCase c = MakeCase("odometer", v, single);
    CHECK(Distributional(c, Audit(c, c.DesignatedPair(kSeed)).run).violations.empty());
  }
}

TEST_CASE("noisy sgd lite: the batch size leaks n only under add/remove") {
  CHECK(AuditDesignated("noisy_sgd_lite", Variant::kBuggy)
            .report.Has(ViolationKind::kInvarianceViolation));
  CHECK(AuditDesignated("noisy_sgd_lite", Variant::kFixed).report.passed());
  const PipelineCase c = MakeCase("noisy_sgd_lite", Variant::kBuggy);
  const NeighborPair bounded = GenNeighbors(c.base_dataset(kSeed), AdjacencyModel::kReplaceOne,
                                            NeighborStrategy::kReplaceCombined, kSeed, 1)[0];
  CHECK(Audit(c, bounded).report.passed());
}

TEST_CASE("domain inference: an out-of-domain record widens the support") {
  CHECK(AuditDesignated("domain_inference", Variant::kBuggy)
            .report.Has(ViolationKind::kInvarianceViolation));
  CHECK(AuditDesignated("domain_inference", Variant::kFixed).report.passed());
  CHECK(AuditStrategy("domain_inference", Variant::kBuggy, "add_duplicate").report.passed());
}

TEST_CASE("double spend: the raw length check is a control-flow leak") {
  CaseOptions o;
  o.check_lengths = true;
  const Audited a = AuditDesignated("double_spend", Variant::kBuggy, o);
  CHECK(a.report.Has(ViolationKind::kControlFlowMismatch));
  REQUIRE(a.run.replay.stop_reason.has_value());
  CHECK(a.run.replay.stop_reason->kind == StopKind::kControlFlowMismatch);
  // Without the check both variants replay cleanly.
  CHECK(AuditDesignated("double_spend", Variant::kBuggy).report.passed());
  CHECK(AuditDesignated("double_spend", Variant::kFixed).report.passed());
}

TEST_CASE("linreg objective: the lower bound squared twice") {
  const Audited buggy = AuditDesignated("linreg_objective", Variant::kBuggy);
  const Violation* v = Find(buggy.report, ViolationKind::kSensitivityViolation);
  REQUIRE(v != nullptr);
  CHECK(ValueToReal(v->declared) == 0.0);
  CHECK(ValueToReal(v->measured) > 0.0);
  CHECK(AuditDesignated("linreg_objective", Variant::kFixed).report.passed());
  CaseOptions symmetric;
  symmetric.linreg_lo = -1.0;
  symmetric.linreg_hi = 1.0;
  CHECK(AuditDesignated("linreg_objective", Variant::kBuggy, symmetric).report.passed());
  CHECK(AuditDesignated("linreg_objective", Variant::kFixed, symmetric).report.passed());
}

TEST_CASE("jam lite: opposite moves double the score sensitivity") {
  const Audited buggy = AuditDesignated("jam_lite", Variant::kBuggy);
  const Violation* v = Find(buggy.report, ViolationKind::kSensitivityViolation);
  REQUIRE(v != nullptr);
  CHECK(ValueToReal(v->measured) == 4.0);
  CHECK(ValueToReal(v->declared) == 2.0);
  CHECK(AuditDesignated("jam_lite", Variant::kFixed).report.passed());

  const PipelineCase c = MakeCase("jam_lite", Variant::kBuggy);
  const TabularDataset d = c.base_dataset(0);
  TabularDataset dp = d;
  dp.ReplaceRow(0, {d.rows()[0][0], 1.0});  // both errors move together
  CHECK(Audit(c, {d, dp}).report.passed());
}

TEST_CASE("unguarded inputs: non-finite values reach the noise") {
  const Audited buggy = AuditDesignated("unguarded_inputs", Variant::kBuggy);
  const Violation* v = Find(buggy.report, ViolationKind::kSensitivityViolation);
  REQUIRE(v != nullptr);
  CHECK(ValueToReal(v->measured) == std::numeric_limits<double>::infinity());

  for (const std::string& s : {"add_nan", "add_inf"}) {
    CAPTURE(s);
    const Audited fixed = AuditStrategy("unguarded_inputs", Variant::kFixed, s);
    CHECK(fixed.report.passed());
    CHECK(fixed.report.rejection.has_value());
    CHECK(fixed.run.replay.rejection.has_value());
    CHECK(fixed.run.replay.entries.empty());
  }

  const PipelineCase b = MakeCase("unguarded_inputs", Variant::kBuggy);
  const PipelineCase f = MakeCase("unguarded_inputs", Variant::kFixed);
  const NeighborPair finite = b.MakePair("add_uniform", kSeed);
  const Audited ab = Audit(b, finite);
  const Audited af = Audit(f, finite);
  CHECK(ab.report.passed());
  CHECK(af.report.passed());
  CHECK(ab.run.record_output == af.run.record_output);
}

TEST_CASE("mutual information helpers") {
  const std::vector<double> a{0, 0, 1, 1}, b{0, 0, 1, 1}, c{0, 1, 0, 1};
  CHECK(MutualInformation(a, b) == doctest::Approx(std::log(2.0)));
  CHECK(MutualInformation(a, c) == doctest::Approx(0.0));
  CHECK(MutualInformationSensitivity(8) ==
        doctest::Approx(std::log(8.0) / 8 + 7.0 / 8 * std::log(8.0 / 7)));
  CHECK(MutualInformationSensitivity(1) == doctest::Approx(std::log(2.0)));
}

}  // namespace
}  // namespace dpaudit
