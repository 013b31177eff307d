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

#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "cbvrp/error.hpp"
#include "cbvrp/kernels.hpp"

namespace cbvrp::kernels {

#ifndef CBVRP_HAVE_AVX2
const KernelTable*
avx2_table() {
    return nullptr;
}
#endif

#ifndef CBVRP_HAVE_NEON
const KernelTable*
neon_table() {
    return nullptr;
}
#endif

namespace {

bool
cpu_has_avx2() {
#if defined(CBVRP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable*
by_name(const std::string& name) {
    for (const auto* table : available()) {
        if (name == table->name) {
            return table;
        }
    }
    return nullptr;
}

const KernelTable*
initial_choice() {
    const auto tables = available();
    if (const char* env = std::getenv(kSimdEnv)) {
        const std::string name(env);
        if (!name.empty() && name != "auto") {
            if (const auto* table = by_name(name)) {
                return table;
            }
            throw Error(std::string(kSimdEnv) + "=" + name + " is not available on this CPU");
        }
    }
    return tables.back();
}

std::atomic<const KernelTable*>&
current() {
    static std::atomic<const KernelTable*> table{initial_choice()};
    return table;
}

void
check_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw DimensionError("vector length mismatch: " + std::to_string(a) + " vs " +
                             std::to_string(b));
    }
}

}  // namespace

std::vector<const KernelTable*>
available() {
    std::vector<const KernelTable*> out{&scalar_table()};
    if (avx2_table() != nullptr && cpu_has_avx2()) {
        out.push_back(avx2_table());
    }
    // NEON is part of the AArch64 baseline.
    if (neon_table() != nullptr) {
        out.push_back(neon_table());
    }
    return out;
}

const KernelTable&
active() {
    return *current().load(std::memory_order_acquire);
}

void
select(const std::string& name) {
    const auto* table = name == "auto" ? available().back() : by_name(name);
    if (table == nullptr) {
        throw Error("kernel set '" + name + "' is not available on this CPU");
    }
    current().store(table, std::memory_order_release);
}

double
dot(std::span<const float> x, std::span<const float> y) {
    check_same_size(x.size(), y.size());
    return active().dot_f32(x.data(), y.data(), x.size());
}

double
squared_distance(std::span<const float> x, std::span<const float> y) {
    check_same_size(x.size(), y.size());
    return active().sqdist_f32(x.data(), y.data(), x.size());
}

double
dot(std::span<const double> x, std::span<const double> y) {
    check_same_size(x.size(), y.size());
    return active().dot_f64(x.data(), y.data(), x.size());
}

void
axpy(double a, std::span<const double> x, std::span<double> y) {
    check_same_size(x.size(), y.size());
    active().axpy_f64(a, x.data(), y.data(), x.size());
}

}  // namespace cbvrp::kernels
