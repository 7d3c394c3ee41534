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

#include "dpaudit/value.h"

#include <charconv>
#include <cmath>
#include <limits>

#include "dpaudit/errors.h"

namespace dpaudit {
namespace {

constexpr const char* kNaN = "NaN";
constexpr const char* kPosInf = "Infinity";
constexpr const char* kNegInf = "-Infinity";

bool TokenToReal(const std::string& s, double& out) {
  if (s == kNaN || s == "nan") {
    out = std::numeric_limits<double>::quiet_NaN();
  } else if (s == kPosInf || s == "inf") {
    out = std::numeric_limits<double>::infinity();
  } else if (s == kNegInf || s == "-inf") {
    out = -std::numeric_limits<double>::infinity();
  } else {
    return false;
  }
  return true;
}

}  // namespace

Value RealToValue(double x) {
  if (std::isnan(x)) return kNaN;
  if (std::isinf(x)) return x > 0 ? kPosInf : kNegInf;
  return x;
}

Value RealsToValue(std::span<const double> xs) {
  Value out = Value::array();
  for (double x : xs) out.push_back(RealToValue(x));
  return out;
}

double ValueToReal(const Value& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_boolean()) return v.get<bool>() ? 1.0 : 0.0;
  if (v.is_string()) {
    double out;
    if (TokenToReal(v.get_ref<const std::string&>(), out)) return out;
  }
  throw InvalidArgumentError("value is not a real: " + v.dump());
}

std::vector<double> ValueToReals(const Value& v) {
  std::vector<double> out;
  if (v.is_array()) {
    out.reserve(v.size());
    for (const auto& item : v) out.push_back(ValueToReal(item));
  } else {
    out.push_back(ValueToReal(v));
  }
  return out;
}

bool IsRealValued(const Value& v) {
  auto scalar = [](const Value& x) {
    double ignored;
    return x.is_number() || x.is_boolean() ||
           (x.is_string() && TokenToReal(x.get_ref<const std::string&>(), ignored));
  };
  if (v.is_array()) {
    for (const auto& item : v) {
      if (!scalar(item)) return false;
    }
    return true;
  }
  return scalar(v);
}

std::string Canonical(const Value& v) { return v.dump(); }

bool BitwiseEqual(const Value& a, const Value& b) {
  return Canonical(a) == Canonical(b);
}

std::string FormatReal(double x) {
  if (!std::isfinite(x)) return RealToValue(x).get<std::string>();
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double ParseReal(const std::string& text) {
  double out;
  if (TokenToReal(text, out)) return out;
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("not a real number: '" + text + "'");
  }
  return out;
}

}  // namespace dpaudit
