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
#include <filesystem>
#include <string_view>
#include <vector>

#include "cbvrp/datamodel.hpp"

namespace cbvrp {

struct SynthConfig {
    std::size_t n_items = 500;
    std::size_t n_clusters = 20;
    std::size_t raw_dim = 64;
    std::size_t latent_dim = 16;
    std::size_t n_channels = 2;
    double noise_sigma = 0.5;
    std::size_t truth_len = 30;
    std::uint64_t seed = 0;

    void
    validate() const;
};

enum class Split { train, val, test };

std::string_view
split_name(Split split);

/// Planted-cluster benchmark. Item i has a latent position
/// z_i = centroid + sigma * noise; its ground-truth list is its M nearest
/// items by latent distance. Each channel observes A_c (z_i + sigma * noise_c)
/// + b_c through its own random transform A_c and offset b_c.
struct SynthDataset {
    std::vector<FeatureSet> channels;
    RelevanceTable truth;
    std::vector<std::size_t> cluster;
    std::vector<Split> splits;

    std::vector<ItemId>
    ids() const;

    std::vector<ItemId>
    ids_in(Split split) const;

    /// Queries of `split` with their full lists; candidates are all items.
    RelevanceTable
    eval_truth(Split split) const;

    /// Queries of `split` with lists restricted to the same split; the
    /// candidate set is the split itself. Used for training.
    RelevanceTable
    train_truth(Split split = Split::train) const;
};

SynthDataset
generate(const SynthConfig& config);

/// Writes channel<c>.cbvf, truth.rel, all.cand and splits.txt, then
/// train.rel / train.cand from train_truth() and val.rel, test.rel,
/// val.cand, test.cand from eval_truth().
void
write_dataset(const SynthDataset& data, const std::filesystem::path& dir);

}  // namespace cbvrp
