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

#ifndef DPAUDIT_ERRORS_H_
#define DPAUDIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dpaudit {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: non-positive scales, malformed probability vectors, shape
// mismatches and the like.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized data (trace files, RNG state bytes, datasets).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A guarded mechanism refused a NaN or infinite input. Raised before the
// call is logged, so no budget is spent.
class InputDomainError : public Error {
 public:
  using Error::Error;
};

// A primitive was invoked while another primitive call was in progress.
class NestedPrimitiveError : public Error {
 public:
  using Error::Error;
};

// epsilon_at was asked for a delta at or below the mass at infinity.
class NoFiniteEpsilonError : public Error {
 public:
  using Error::Error;
};

// Too few samples for a trade-off estimate.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// The privacy profile handed to PLD reconstruction is not convex.
class NonConvexProfileError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpaudit

#endif  // DPAUDIT_ERRORS_H_
