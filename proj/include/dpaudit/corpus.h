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

// Paired buggy/fixed pipelines. Each buggy pipeline carries one known
// privacy bug; its fixed twin differs only in the lines that bug lives in.

#ifndef DPAUDIT_CORPUS_H_
#define DPAUDIT_CORPUS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpaudit/neighbors.h"
#include "dpaudit/recorder.h"
#include "dpaudit/validator.h"

namespace dpaudit {

enum class Variant { kBuggy, kFixed };

std::string VariantName(Variant v);
Variant ParseVariant(const std::string& name);

enum class DesignatedAudit { kRecordReplay, kDistributional };

std::string DesignatedAuditName(DesignatedAudit a);

inline constexpr double kCorpusEpsilon = 1.0;
inline constexpr double kCorpusDelta = 1e-6;
// Pair source naming a hand-built neighbor pair instead of a generator strategy.
inline constexpr const char* kCraftedStrategy = "crafted";
inline constexpr const char* kDefaultGroup = "table2";
inline constexpr const char* kPathologicalGroup = "pathological";

struct CaseOptions {
  // scaled_count
  double multiplier = 2.0;
  // privbayes_lite: requested network degree K (two features) and the
  // mutual-information threshold of the structure branch.
  int privbayes_k = 1;
  double mi_threshold = 0.5;
  // odometer: number of count queries sharing the budget and the slack
  // delta of the advanced composition bound.
  int odometer_queries = 10;
  double odometer_slack_delta = 1e-6;
  // noisy_sgd_lite
  int sgd_steps = 3;
  int sgd_public_batch = 20;
  // domain_inference: public domain size.
  int declared_domain = 5;
  // double_spend: extra noisy call when a raw value falls outside the
  // public range, a non-private check of the input.
  bool check_lengths = false;
  // linreg_objective: public bounds of the feature.
  double linreg_lo = 0.0;
  double linreg_hi = 2.0;
};

struct PipelineCase {
  std::string name;
  Variant variant = Variant::kBuggy;
  std::optional<ViolationKind> expected_violation;
  AdjacencyModel adjacency = AdjacencyModel::kAddRemove;
  // Generator strategy name, or kCraftedStrategy.
  std::string strategy;
  // Further strategies that exercise the case without targeting its bug.
  std::vector<std::string> extra_strategies;
  double claimed_epsilon = kCorpusEpsilon;
  double claimed_delta = kCorpusDelta;
  DesignatedAudit audit = DesignatedAudit::kRecordReplay;
  std::string group = kDefaultGroup;
  std::vector<Column> schema;
  Pipeline pipeline;

  // Dataset the designated strategy starts from.
  std::function<TabularDataset(std::uint64_t seed)> base_dataset;
  // Hand-built pair for kCraftedStrategy; empty when the case has none.
  std::function<NeighborPair()> crafted_pair;

  // The pair for `strategy_name` (a generator strategy or kCraftedStrategy).
  NeighborPair MakePair(const std::string& strategy_name, std::uint64_t seed) const;
  NeighborPair DesignatedPair(std::uint64_t seed) const { return MakePair(strategy, seed); }

  // {name, variant, expected_violation, adjacency, strategy, audit, group,
  //  claimed_epsilon, claimed_delta}
  Value Manifest() const;
};

// Registered case names, in matrix order.
const std::vector<std::string>& CaseNames();

// Throws InvalidArgumentError for an unknown name.
PipelineCase MakeCase(const std::string& name, Variant variant, const CaseOptions& options = {});

// Every case in both variants, buggy first within each name.
std::vector<PipelineCase> AllCases(const CaseOptions& options = {});

// The (buggy) advanced composition bound with 1/delta' where ln(1/delta')
// belongs.
double BuggyAdvancedCompositionEpsilon(double epsilon, std::int64_t k, double delta_slack);

// Mutual information in nats between two columns of discrete values.
double MutualInformation(const std::vector<double>& a, const std::vector<double>& b);

// Replace-one sensitivity bound of the mutual information of n records:
// (1/n) ln n + ((n - 1)/n) ln(n / (n - 1)).
double MutualInformationSensitivity(std::size_t n);

}  // namespace dpaudit

#endif  // DPAUDIT_CORPUS_H_
