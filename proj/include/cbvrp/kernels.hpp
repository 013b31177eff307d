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

#include <span>
#include <string>
#include <vector>

#include "cbvrp/kernel_table.hpp"

namespace cbvrp::kernels {

/// Environment variable forcing an implementation: `scalar`, `avx2`, `neon`
/// or `auto` (default).
inline constexpr const char* kSimdEnv = "CBVRP_SIMD";

/// Implementations compiled in and supported by this CPU, scalar first.
std::vector<const KernelTable*>
available();

/// The table every wrapper below dispatches to. Chosen once per process:
/// the widest available set unless CBVRP_SIMD says otherwise.
const KernelTable&
active();

/// Overrides the process-wide choice by name; throws on an unknown or
/// unsupported name. Intended for tests and benchmarks.
void
select(const std::string& name);

double
dot(std::span<const float> x, std::span<const float> y);

double
squared_distance(std::span<const float> x, std::span<const float> y);

double
dot(std::span<const double> x, std::span<const double> y);

void
axpy(double a, std::span<const double> x, std::span<double> y);

}  // namespace cbvrp::kernels
