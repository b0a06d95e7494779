// Copyright 2026 The breathtrap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace breathtrap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // I/O and anything unexpected
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

const char* tool_version();

// args excludes the program name, e.g. {"well", "floquet", "--out", "dir"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace breathtrap::cli
