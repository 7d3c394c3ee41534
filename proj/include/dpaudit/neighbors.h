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

// Tabular datasets and neighboring-pair generation.

#ifndef DPAUDIT_NEIGHBORS_H_
#define DPAUDIT_NEIGHBORS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpaudit/value.h"

namespace dpaudit {

enum class ColumnType { kCategorical, kReal };

struct Column {
  std::string name;
  ColumnType type = ColumnType::kReal;
  // Public bounds. Categorical columns take integer values in [lo, hi].
  std::optional<double> lo;
  std::optional<double> hi;

  friend bool operator==(const Column&, const Column&) = default;
};

using Row = std::vector<double>;

class TabularDataset {
 public:
  TabularDataset() = default;
  explicit TabularDataset(std::vector<Column> schema, std::vector<Row> rows = {});

  // One real column named "x" holding `values`.
  static TabularDataset FromValues(std::vector<double> values, std::string name = "x");

  const std::vector<Column>& schema() const { return schema_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  std::size_t num_columns() const { return schema_.size(); }

  std::size_t ColumnIndex(const std::string& name) const;
  std::vector<double> ColumnValues(std::size_t column) const;

  void AddRow(Row row);
  void RemoveRow(std::size_t index);
  void ReplaceRow(std::size_t index, Row row);

  // {"columns": [{name, type, lo, hi}], "data": [[column values]...]}
  Value ToJson() const;
  static TabularDataset FromJson(const Value& v);

  // Comma-separated; header cells are "name|type|lo|hi". Non-finite cells
  // are written as nan, inf and -inf.
  std::string ToCsv() const;
  static TabularDataset FromCsv(const std::string& text);

  // Bitwise comparison of schema and cells (NaN equals NaN).
  friend bool operator==(const TabularDataset& a, const TabularDataset& b);

 private:
  void CheckRow(const Row& row) const;

  std::vector<Column> schema_;
  std::vector<Row> rows_;
};

enum class AdjacencyModel { kAddRemove, kReplaceOne };

std::string AdjacencyName(AdjacencyModel m);
AdjacencyModel ParseAdjacency(const std::string& name);

enum class NeighborStrategy {
  kRemoveRandom,
  kAddUniform,
  kAddMarginal,
  kAddDuplicate,
  kAddFloatLimit,
  kAddOutOfDomain,
  kAddNan,
  kAddInf,
  kReplaceCombined,
};

std::string StrategyName(NeighborStrategy s);
NeighborStrategy ParseStrategy(const std::string& name);
const std::vector<NeighborStrategy>& AllStrategies();

struct NeighborPair {
  TabularDataset d;
  TabularDataset dp;
};

inline constexpr int kDefaultPairCount = 5;

// Uniform rows inside each column's bounds (categorical columns default to
// [0, 1], real columns to [0, 1) when unbounded).
TabularDataset GenSynthetic(std::uint64_t seed, std::size_t n,
                            const std::vector<Column>& schema);

// The strategy picks the injected row; the model decides whether it is
// appended (AddRemove) or replaces a random row (ReplaceOne).
// remove_random is AddRemove only and replace_combined is ReplaceOne only.
std::vector<NeighborPair> GenNeighbors(const TabularDataset& d, AdjacencyModel model,
                                       NeighborStrategy strategy, std::uint64_t seed,
                                       int count = kDefaultPairCount);

// True when the pair satisfies the model's adjacency predicate.
bool IsAdjacent(const TabularDataset& d, const TabularDataset& dp, AdjacencyModel model);

}  // namespace dpaudit

#endif  // DPAUDIT_NEIGHBORS_H_
