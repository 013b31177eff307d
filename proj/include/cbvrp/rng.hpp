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
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace cbvrp {

/// Seeded random stream. Distributions are implemented here rather than with
/// <random> distributions, whose output is implementation-defined, so a seed
/// yields the same draws on every standard library.
class Rng {
 public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {
    }

    std::uint64_t
    next() {
        return engine_();
    }

    /// Uniform on [0, 1) with 53 random bits.
    double
    uniform();

    /// Uniform on [lo, hi).
    double
    uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Uniform integer in [0, n); n > 0.
    std::size_t
    below(std::size_t n);

    /// Standard normal (Box-Muller).
    double
    normal();

    template <typename T>
    void
    shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }

    template <typename T>
    void
    shuffle(std::vector<T>& items) {
        shuffle(std::span<T>(items));
    }

    /// k distinct indices from [0, n) in draw order (partial Fisher-Yates).
    std::vector<std::size_t>
    sample_indices(std::size_t n, std::size_t k);

 private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cbvrp
