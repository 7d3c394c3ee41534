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

#ifndef DPAUDIT_VALUE_H_
#define DPAUDIT_VALUE_H_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace dpaudit {

// Trace payloads (primitive inputs and outputs, ensure_equality values) are
// JSON values. Objects keep sorted keys and doubles print in shortest
// round-trip form, so two values are bitwise equal iff their dumps match.
// Non-finite reals are encoded as the strings "NaN", "Infinity" and
// "-Infinity".
using Value = nlohmann::json;

Value RealToValue(double x);
Value RealsToValue(std::span<const double> xs);

// Accepts a number, a non-finite token, or a flat array of those.
double ValueToReal(const Value& v);
std::vector<double> ValueToReals(const Value& v);

// True when `v` is a number, a non-finite token or a flat array of them.
bool IsRealValued(const Value& v);

// Canonical byte form used for exact equality.
std::string Canonical(const Value& v);
bool BitwiseEqual(const Value& a, const Value& b);

// Shortest round-trip decimal form of a double, or one of the non-finite
// tokens above.
std::string FormatReal(double x);
// Inverse of FormatReal. Also accepts "nan", "inf", "-inf".
double ParseReal(const std::string& text);

}  // namespace dpaudit

#endif  // DPAUDIT_VALUE_H_
