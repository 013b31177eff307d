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

// Shared helpers for the test binaries.
#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include "cbvrp/datamodel.hpp"
#include "cbvrp/rng.hpp"

namespace cbvrp::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("cbvrp_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    TempDir(const TempDir&) = delete;
    TempDir&
    operator=(const TempDir&) = delete;

    const std::filesystem::path&
    path() const {
        return path_;
    }

    std::filesystem::path
    operator/(const std::string& name) const {
        return path_ / name;
    }

 private:
    std::filesystem::path path_;
};

inline std::vector<float>
random_vector(Rng& rng, std::size_t n, double scale = 1.0) {
    std::vector<float> v(n);
    for (auto& x : v) {
        x = static_cast<float>(rng.normal() * scale);
    }
    return v;
}

/// Random feature set; ids are "i<index>" unless `weird_ids` asks for
/// multi-byte UTF-8 ids.
inline FeatureSet
random_feature_set(Rng& rng, std::size_t items, std::size_t dim, std::size_t max_frames,
                   bool weird_ids = false) {
    FeatureSet set(dim);
    for (std::size_t i = 0; i < items; ++i) {
        const std::size_t frames = 1 + rng.below(max_frames);
        std::string id = weird_ids ? "\xc3\xa9l\xc3\xa9ment-" + std::to_string(i) : "i" + std::to_string(i);
        set.add(id, random_vector(rng, frames * dim, 10.0));
    }
    return set;
}

inline std::vector<ItemId>
numbered_ids(const std::string& prefix, std::size_t n) {
    std::vector<ItemId> ids;
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back(prefix + std::to_string(i));
    }
    return ids;
}

}  // namespace cbvrp::testing
