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

// Function-pointer table implemented once per instruction set. Kept free of
// standard headers beyond <cstddef> because the SIMD translation units are
// compiled with extra -m flags.
#pragma once

#include <cstddef>

namespace cbvrp::kernels {

struct KernelTable {
    const char* name;
    /// Dot product of float vectors, accumulated in double.
    double (*dot_f32)(const float* x, const float* y, std::size_t n);
    /// Squared Euclidean distance of float vectors, accumulated in double.
    double (*sqdist_f32)(const float* x, const float* y, std::size_t n);
    double (*dot_f64)(const double* x, const double* y, std::size_t n);
    /// y += a * x
    void (*axpy_f64)(double a, const double* x, double* y, std::size_t n);
};

const KernelTable&
scalar_table();

/// nullptr when not compiled in; the caller still has to check CPU support.
const KernelTable*
avx2_table();

const KernelTable*
neon_table();

}  // namespace cbvrp::kernels
