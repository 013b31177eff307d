// Copyright 2026-present the cbvrp project
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

namespace cbvrp {

/// Name of the environment variable that caps worker threads.
inline constexpr const char* kThreadsEnv = "CBVRP_THREADS";

/// Worker count: CBVRP_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t
thread_count();

/// Splits [0, n) into contiguous chunks and runs `body(begin, end)` on each,
/// one chunk per worker. Callers write results only to disjoint slots, so
/// output never depends on scheduling.
void
parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace cbvrp
