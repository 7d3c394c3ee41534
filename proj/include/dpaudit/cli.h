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

// Command-line front end. Exit codes: 0 pass, 1 violations found, 2 usage or
// internal error.

#ifndef DPAUDIT_CLI_H_
#define DPAUDIT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace dpaudit {

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitError = 2;

// Environment variable supplying the seed when --seed is absent.
inline constexpr const char* kSeedEnvVar = "DPAUDIT_SEED";

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dpaudit

#endif  // DPAUDIT_CLI_H_
