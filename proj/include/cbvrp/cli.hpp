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

#include <iosfwd>
#include <string>
#include <vector>

namespace cbvrp::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Marks the resolved-config block written to `err` at the start of each
/// command. The block between the two markers is itself a valid config file.
inline constexpr const char* kConfigBegin = "# resolved config";
inline constexpr const char* kConfigEnd = "# end config";

/// Runs `cbvrp <args...>`; args excludes the program name.
int
run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cbvrp::cli
