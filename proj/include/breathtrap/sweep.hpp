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

#include <cstddef>
#include <functional>
#include <vector>

namespace breathtrap {

// Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware
// concurrency). Each index runs exactly once; callers write results into
// pre-sized slots, so output never depends on scheduling. If bodies throw,
// the exception of the lowest failing index is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

// count points from lo to hi inclusive; count == 1 yields {lo}.
std::vector<double> linspace(double lo, double hi, int count);

}  // namespace breathtrap
