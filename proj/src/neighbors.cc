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

#include "dpaudit/neighbors.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "dpaudit/errors.h"
#include "dpaudit/rng.h"

namespace dpaudit {
namespace {

bool SameBits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b) ||
         (std::isnan(a) && std::isnan(b));
}

bool SameRow(const Row& a, const Row& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), SameBits);
}

std::size_t UniformIndex(Generator& gen, std::size_t n) {
  return static_cast<std::size_t>(gen.NextU64() % n);
}

std::string TypeName(ColumnType t) {
  return t == ColumnType::kCategorical ? "categorical" : "real";
}

ColumnType ParseType(const std::string& s) {
  if (s == "categorical") return ColumnType::kCategorical;
  if (s == "real") return ColumnType::kReal;
  throw ParseError("unknown column type '" + s + "'");
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

// Range used for sampling and out-of-domain offsets: declared bounds first,
// then the observed range, then a unit default.
std::pair<double, double> ColumnRange(const TabularDataset& d, std::size_t j) {
  const Column& c = d.schema()[j];
  double lo = c.lo.value_or(std::numeric_limits<double>::infinity());
  double hi = c.hi.value_or(-std::numeric_limits<double>::infinity());
  if (!c.lo || !c.hi) {
    for (const Row& r : d.rows()) {
      if (!std::isfinite(r[j])) continue;
      if (!c.lo) lo = std::min(lo, r[j]);
      if (!c.hi) hi = std::max(hi, r[j]);
    }
  }
  if (!std::isfinite(lo)) lo = 0.0;
  if (!std::isfinite(hi)) hi = std::max(lo, c.type == ColumnType::kCategorical ? 1.0 : lo + 1.0);
  return {lo, hi};
}

double SampleCell(const Column& c, double lo, double hi, Generator& gen) {
  if (c.type == ColumnType::kCategorical) {
    const auto span = static_cast<std::uint64_t>(std::floor(hi) - std::ceil(lo)) + 1;
    return std::ceil(lo) + static_cast<double>(gen.NextU64() % span);
  }
  return lo + (hi - lo) * gen.Uniform();
}

Row UniformRow(const TabularDataset& d, Generator& gen) {
  Row row(d.num_columns());
  for (std::size_t j = 0; j < row.size(); ++j) {
    const auto [lo, hi] = ColumnRange(d, j);
    row[j] = SampleCell(d.schema()[j], lo, hi, gen);
  }
  return row;
}

Row InjectedRow(const TabularDataset& d, NeighborStrategy strategy, int pair_index,
                Generator& gen) {
  const std::size_t m = d.num_columns();
  switch (strategy) {
    case NeighborStrategy::kAddUniform:
    case NeighborStrategy::kReplaceCombined:
      return UniformRow(d, gen);
    case NeighborStrategy::kAddMarginal: {
      if (d.size() == 0) throw InvalidArgumentError("add_marginal needs a nonempty dataset");
      Row row(m);
      for (std::size_t j = 0; j < m; ++j) row[j] = d.rows()[UniformIndex(gen, d.size())][j];
      return row;
    }
    case NeighborStrategy::kAddDuplicate:
      if (d.size() == 0) throw InvalidArgumentError("add_duplicate needs a nonempty dataset");
      return d.rows()[UniformIndex(gen, d.size())];
    case NeighborStrategy::kAddFloatLimit: {
      const double big = std::numeric_limits<double>::max();
      return Row(m, pair_index % 2 == 0 ? big : -big);
    }
    case NeighborStrategy::kAddOutOfDomain: {
      Row row(m);
      for (std::size_t j = 0; j < m; ++j) {
        const auto [lo, hi] = ColumnRange(d, j);
        row[j] = hi + 10.0 * std::max(hi - lo, 1.0);
      }
      return row;
    }
    case NeighborStrategy::kAddNan:
      return Row(m, std::numeric_limits<double>::quiet_NaN());
    case NeighborStrategy::kAddInf: {
      const double inf = std::numeric_limits<double>::infinity();
      return Row(m, pair_index % 2 == 0 ? inf : -inf);
    }
    case NeighborStrategy::kRemoveRandom:
      break;
  }
  throw InvalidArgumentError("strategy does not inject a row");
}

}  // namespace

TabularDataset::TabularDataset(std::vector<Column> schema, std::vector<Row> rows)
    : schema_(std::move(schema)) {
  for (Row& r : rows) AddRow(std::move(r));
}

TabularDataset TabularDataset::FromValues(std::vector<double> values, std::string name) {
  TabularDataset d({Column{.name = std::move(name), .type = ColumnType::kReal,
                           .lo = std::nullopt, .hi = std::nullopt}});
  for (double x : values) d.AddRow({x});
  return d;
}

std::size_t TabularDataset::ColumnIndex(const std::string& name) const {
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    if (schema_[j].name == name) return j;
  }
  throw InvalidArgumentError("no column named '" + name + "'");
}

std::vector<double> TabularDataset::ColumnValues(std::size_t column) const {
  if (column >= schema_.size()) throw InvalidArgumentError("column index out of range");
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const Row& r : rows_) out.push_back(r[column]);
  return out;
}

void TabularDataset::CheckRow(const Row& row) const {
  if (row.size() != schema_.size()) {
    throw InvalidArgumentError("row width " + std::to_string(row.size()) +
                               " does not match schema width " +
                               std::to_string(schema_.size()));
  }
}

void TabularDataset::AddRow(Row row) {
  CheckRow(row);
  rows_.push_back(std::move(row));
}

void TabularDataset::RemoveRow(std::size_t index) {
  if (index >= rows_.size()) throw InvalidArgumentError("cannot remove: row index out of range");
  rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(index));
}

void TabularDataset::ReplaceRow(std::size_t index, Row row) {
  if (index >= rows_.size()) throw InvalidArgumentError("cannot replace: row index out of range");
  CheckRow(row);
  rows_[index] = std::move(row);
}

Value TabularDataset::ToJson() const {
  Value columns = Value::array();
  Value data = Value::array();
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    const Column& c = schema_[j];
    columns.push_back({{"name", c.name},
                       {"type", TypeName(c.type)},
                       {"lo", c.lo ? RealToValue(*c.lo) : Value(nullptr)},
                       {"hi", c.hi ? RealToValue(*c.hi) : Value(nullptr)}});
    data.push_back(RealsToValue(ColumnValues(j)));
  }
  return {{"columns", columns}, {"data", data}};
}

TabularDataset TabularDataset::FromJson(const Value& v) {
  try {
    std::vector<Column> schema;
    for (const Value& c : v.at("columns")) {
      Column col{.name = c.at("name").get<std::string>(),
                 .type = ParseType(c.at("type").get<std::string>()),
                 .lo = std::nullopt,
                 .hi = std::nullopt};
      if (!c.at("lo").is_null()) col.lo = ValueToReal(c.at("lo"));
      if (!c.at("hi").is_null()) col.hi = ValueToReal(c.at("hi"));
      schema.push_back(std::move(col));
    }
    const Value& data = v.at("data");
    if (data.size() != schema.size()) throw ParseError("dataset: column count mismatch");
    const std::size_t n = schema.empty() ? 0 : data.at(0).size();
    std::vector<Row> rows(n, Row(schema.size()));
    for (std::size_t j = 0; j < schema.size(); ++j) {
      const std::vector<double> col = ValueToReals(data.at(j));
      if (col.size() != n) throw ParseError("dataset: ragged columns");
      for (std::size_t i = 0; i < n; ++i) rows[i][j] = col[i];
    }
    return TabularDataset(std::move(schema), std::move(rows));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("dataset: ") + e.what());
  } catch (const InvalidArgumentError& e) {
    throw ParseError(std::string("dataset: ") + e.what());
  }
}

std::string TabularDataset::ToCsv() const {
  auto cell = [](double x) {
    if (std::isnan(x)) return std::string("nan");
    if (std::isinf(x)) return std::string(x > 0 ? "inf" : "-inf");
    return FormatReal(x);
  };
  std::ostringstream out;
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    const Column& c = schema_[j];
    if (j) out << ',';
    out << c.name << '|' << TypeName(c.type) << '|' << (c.lo ? cell(*c.lo) : "") << '|'
        << (c.hi ? cell(*c.hi) : "");
  }
  out << '\n';
  for (const Row& r : rows_) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) out << ',';
      out << cell(r[j]);
    }
    out << '\n';
  }
  return out.str();
}

TabularDataset TabularDataset::FromCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv: missing header");
  std::vector<Column> schema;
  if (!line.empty()) {
    for (const std::string& h : Split(line, ',')) {
      const std::vector<std::string> parts = Split(h, '|');
      if (parts.size() != 4) throw ParseError("csv: bad header cell '" + h + "'");
      Column c{.name = parts[0], .type = ParseType(parts[1]), .lo = std::nullopt,
               .hi = std::nullopt};
      if (!parts[2].empty()) c.lo = ParseReal(parts[2]);
      if (!parts[3].empty()) c.hi = ParseReal(parts[3]);
      schema.push_back(std::move(c));
    }
  }
  TabularDataset d(std::move(schema));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Row row;
    for (const std::string& cell : Split(line, ',')) row.push_back(ParseReal(cell));
    if (row.size() != d.num_columns()) throw ParseError("csv: row width mismatch");
    d.AddRow(std::move(row));
  }
  return d;
}

bool operator==(const TabularDataset& a, const TabularDataset& b) {
  if (a.schema_ != b.schema_ || a.rows_.size() != b.rows_.size()) return false;
  for (std::size_t i = 0; i < a.rows_.size(); ++i) {
    if (!SameRow(a.rows_[i], b.rows_[i])) return false;
  }
  return true;
}

std::string AdjacencyName(AdjacencyModel m) {
  return m == AdjacencyModel::kAddRemove ? "add_remove" : "replace_one";
}

AdjacencyModel ParseAdjacency(const std::string& name) {
  if (name == "add_remove" || name == "add-remove" || name == "AddRemove") return AdjacencyModel::kAddRemove;
  if (name == "replace_one" || name == "replace-one" || name == "ReplaceOne") return AdjacencyModel::kReplaceOne;
  throw ParseError("unknown adjacency model '" + name + "'");
}

std::string StrategyName(NeighborStrategy s) {
  switch (s) {
    case NeighborStrategy::kRemoveRandom: return "remove_random";
    case NeighborStrategy::kAddUniform: return "add_uniform";
    case NeighborStrategy::kAddMarginal: return "add_marginal";
    case NeighborStrategy::kAddDuplicate: return "add_duplicate";
    case NeighborStrategy::kAddFloatLimit: return "add_float_limit";
    case NeighborStrategy::kAddOutOfDomain: return "add_out_of_domain";
    case NeighborStrategy::kAddNan: return "add_nan";
    case NeighborStrategy::kAddInf: return "add_inf";
    case NeighborStrategy::kReplaceCombined: return "replace_combined";
  }
  return "";
}

const std::vector<NeighborStrategy>& AllStrategies() {
  static const std::vector<NeighborStrategy> kAll = {
      NeighborStrategy::kRemoveRandom,  NeighborStrategy::kAddUniform,
      NeighborStrategy::kAddMarginal,   NeighborStrategy::kAddDuplicate,
      NeighborStrategy::kAddFloatLimit, NeighborStrategy::kAddOutOfDomain,
      NeighborStrategy::kAddNan,        NeighborStrategy::kAddInf,
      NeighborStrategy::kReplaceCombined};
  return kAll;
}

NeighborStrategy ParseStrategy(const std::string& name) {
  for (NeighborStrategy s : AllStrategies()) {
    if (StrategyName(s) == name) return s;
  }
  throw ParseError("unknown neighbor strategy '" + name + "'");
}

TabularDataset GenSynthetic(std::uint64_t seed, std::size_t n,
                            const std::vector<Column>& schema) {
  if (schema.empty()) throw InvalidArgumentError("gen_synthetic: empty schema");
  if (n == 0) throw InvalidArgumentError("gen_synthetic: n must be at least 1");
  for (const Column& c : schema) {
    if (c.lo && c.hi && *c.lo > *c.hi) {
      throw InvalidArgumentError("gen_synthetic: column '" + c.name + "' has lo > hi");
    }
  }
  Generator gen(seed);
  TabularDataset d(schema);
  for (std::size_t i = 0; i < n; ++i) {
    Row row(schema.size());
    for (std::size_t j = 0; j < schema.size(); ++j) {
      const Column& c = schema[j];
      const double lo = c.lo.value_or(0.0);
      const double hi = c.hi.value_or(c.type == ColumnType::kCategorical ? 1.0 : lo + 1.0);
      row[j] = SampleCell(c, lo, hi, gen);
    }
    d.AddRow(std::move(row));
  }
  return d;
}

std::vector<NeighborPair> GenNeighbors(const TabularDataset& d, AdjacencyModel model,
                                       NeighborStrategy strategy, std::uint64_t seed,
                                       int count) {
  if (count < 1) throw InvalidArgumentError("gen_neighbors: count must be positive");
  if (strategy == NeighborStrategy::kRemoveRandom && model != AdjacencyModel::kAddRemove) {
    throw InvalidArgumentError("remove_random requires the add_remove model");
  }
  if (strategy == NeighborStrategy::kReplaceCombined &&
      model != AdjacencyModel::kReplaceOne) {
    throw InvalidArgumentError("replace_combined requires the replace_one model");
  }
  if (d.size() == 0 && (model == AdjacencyModel::kReplaceOne ||
                        strategy == NeighborStrategy::kRemoveRandom)) {
    throw InvalidArgumentError("gen_neighbors: cannot remove or replace in an empty dataset");
  }
  constexpr int kMaxAttempts = 64;
  std::vector<NeighborPair> pairs;
  for (int p = 0; p < count; ++p) {
    Generator gen = Generator::Derive(seed, static_cast<std::uint64_t>(p), 0,
                                      static_cast<std::uint64_t>(strategy));
    TabularDataset dp = d;
    if (strategy == NeighborStrategy::kRemoveRandom) {
      dp.RemoveRow(UniformIndex(gen, d.size()));
    } else if (model == AdjacencyModel::kAddRemove) {
      dp.AddRow(InjectedRow(d, strategy, p, gen));
    } else {
      const std::size_t target = UniformIndex(gen, d.size());
      bool replaced = false;
      for (int attempt = 0; attempt < kMaxAttempts && !replaced; ++attempt) {
        Row row = InjectedRow(d, strategy, p, gen);
        if (!SameRow(row, d.rows()[target])) {
          dp.ReplaceRow(target, std::move(row));
          replaced = true;
        }
      }
      if (!replaced) {
        throw InvalidArgumentError("gen_neighbors: strategy '" + StrategyName(strategy) +
                                   "' cannot produce a row different from row " +
                                   std::to_string(target));
      }
    }
    pairs.push_back({d, std::move(dp)});
  }
  return pairs;
}

bool IsAdjacent(const TabularDataset& d, const TabularDataset& dp, AdjacencyModel model) {
  if (d.schema() != dp.schema()) return false;
  const auto& a = d.rows();
  const auto& b = dp.rows();
  if (model == AdjacencyModel::kReplaceOne) {
    if (a.size() != b.size()) return false;
    std::size_t differing = 0;
    for (std::size_t i = 0; i < a.size(); ++i) differing += SameRow(a[i], b[i]) ? 0 : 1;
    return differing == 1;
  }
  const auto& big = a.size() > b.size() ? a : b;
  const auto& small = a.size() > b.size() ? b : a;
  if (big.size() != small.size() + 1) return false;
  // small must equal big with exactly one row deleted.
  std::size_t i = 0;
  while (i < small.size() && SameRow(small[i], big[i])) ++i;
  for (std::size_t j = i; j < small.size(); ++j) {
    if (!SameRow(small[j], big[j + 1])) return false;
  }
  return true;
}

}  // namespace dpaudit
