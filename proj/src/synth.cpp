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

#include "cbvrp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "cbvrp/error.hpp"
#include "cbvrp/rng.hpp"

namespace cbvrp {

namespace {

// Per-channel distortion: the columns of A_c are scaled by exp(N(0, s^2))
// and every item shares an offset b_c. Feature norms come out near
// kFeatureScale, which puts the default margin and learning rate in a
// regime where four epochs of SGD make visible progress.
constexpr double kLogScaleSigma = 0.75;
constexpr double kOffsetNorm = 1.0;
constexpr double kFeatureScale = 4.0;

std::string
item_name(std::size_t index, std::size_t n_items) {
    const auto digits = std::to_string(n_items > 0 ? n_items - 1 : 0).size();
    auto s = std::to_string(index);
    return "v" + std::string(digits - s.size(), '0') + s;
}

}  // namespace

void
SynthConfig::validate() const {
    if (n_items == 0 || n_clusters == 0 || raw_dim == 0 || latent_dim == 0 || n_channels == 0 ||
        truth_len == 0) {
        throw Error("synth: counts and dimensions must be positive");
    }
    if (truth_len >= n_items) {
        throw Error("synth: M ≥ n_items (truth length " + std::to_string(truth_len) +
                    ", n_items " + std::to_string(n_items) + ")");
    }
    if (n_clusters > n_items) {
        throw Error("synth: n_clusters > n_items");
    }
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw Error("synth: noise_sigma must be finite and >= 0");
    }
}

std::string_view
split_name(Split split) {
    switch (split) {
        case Split::train:
            return "train";
        case Split::val:
            return "val";
        case Split::test:
            return "test";
    }
    return "?";
}

std::vector<ItemId>
SynthDataset::ids() const {
    return truth.candidate_ids;
}

std::vector<ItemId>
SynthDataset::ids_in(Split split) const {
    std::vector<ItemId> out;
    for (std::size_t i = 0; i < splits.size(); ++i) {
        if (splits[i] == split) {
            out.push_back(truth.candidate_ids[i]);
        }
    }
    return out;
}

RelevanceTable
SynthDataset::eval_truth(Split split) const {
    RelevanceTable out;
    out.candidate_ids = truth.candidate_ids;
    for (std::size_t i = 0; i < splits.size(); ++i) {
        if (splits[i] == split) {
            out.lists.add(truth.lists.query(i), truth.lists.list(i));
        }
    }
    return out;
}

RelevanceTable
SynthDataset::train_truth(Split split) const {
    RelevanceTable out;
    out.candidate_ids = ids_in(split);
    const std::unordered_set<std::string_view> members(out.candidate_ids.begin(),
                                                       out.candidate_ids.end());
    for (std::size_t i = 0; i < splits.size(); ++i) {
        if (splits[i] != split) {
            continue;
        }
        std::vector<ItemId> kept;
        for (const auto& id : truth.lists.list(i)) {
            if (members.count(id) != 0) {
                kept.push_back(id);
            }
        }
        out.lists.add(truth.lists.query(i), std::move(kept));
    }
    return out;
}

SynthDataset
generate(const SynthConfig& config) {
    config.validate();
    const std::size_t n = config.n_items;
    const std::size_t latent = config.latent_dim;
    const double unit = 1.0 / std::sqrt(static_cast<double>(latent));
    Rng rng(config.seed);

    std::vector<double> centroids(config.n_clusters * latent);
    for (double& c : centroids) {
        c = rng.normal() * unit;
    }

    SynthDataset data;
    data.cluster.resize(n);
    {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(order);
        for (std::size_t i = 0; i < n; ++i) {
            data.cluster[order[i]] = i % config.n_clusters;
        }
    }

    std::vector<double> z(n * latent);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < latent; ++k) {
            z[i * latent + k] = centroids[data.cluster[i] * latent + k] +
                                config.noise_sigma * rng.normal() * unit;
        }
    }

    std::vector<ItemId> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids[i] = item_name(i, n);
    }

    const std::size_t raw = config.raw_dim;
    const double raw_unit = kFeatureScale / std::sqrt(static_cast<double>(raw));
    std::vector<double> view(latent);
    for (std::size_t c = 0; c < config.n_channels; ++c) {
        std::vector<double> transform(raw * latent);
        for (double& a : transform) {
            a = rng.normal() * raw_unit;
        }
        for (std::size_t k = 0; k < latent; ++k) {
            const double s = std::exp(kLogScaleSigma * rng.normal());
            for (std::size_t r = 0; r < raw; ++r) {
                transform[r * latent + k] *= s;
            }
        }
        std::vector<double> offset(raw);
        for (double& b : offset) {
            b = rng.normal() * raw_unit * kOffsetNorm;
        }

        FeatureSet set(raw);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < latent; ++k) {
                view[k] = z[i * latent + k] + config.noise_sigma * rng.normal() * unit;
            }
            std::vector<float> x(raw);
            for (std::size_t r = 0; r < raw; ++r) {
                double acc = offset[r];
                for (std::size_t k = 0; k < latent; ++k) {
                    acc += transform[r * latent + k] * view[k];
                }
                x[r] = static_cast<float>(acc);
            }
            set.add(ids[i], std::move(x));
        }
        data.channels.push_back(std::move(set));
    }

    // Ground truth: M nearest by latent distance, ties by id (= index order).
    const std::size_t m = std::min(config.truth_len, n - 1);
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t i = 0; i < n; ++i) {
        dist.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            double d = 0.0;
            for (std::size_t k = 0; k < latent; ++k) {
                const double diff = z[i * latent + k] - z[j * latent + k];
                d += diff * diff;
            }
            dist.emplace_back(d, j);
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(m), dist.end());
        std::vector<ItemId> list;
        list.reserve(m);
        for (std::size_t r = 0; r < m; ++r) {
            list.push_back(ids[dist[r].second]);
        }
        data.truth.lists.add(ids[i], std::move(list));
    }
    data.truth.candidate_ids = ids;

    // Stratified 45/10/45 split: within each cluster, shuffled rank r of n_c
    // falls at (r + 0.5) / n_c.
    data.splits.assign(n, Split::test);
    for (std::size_t c = 0; c < config.n_clusters; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i) {
            if (data.cluster[i] == c) {
                members.push_back(i);
            }
        }
        rng.shuffle(members);
        for (std::size_t r = 0; r < members.size(); ++r) {
            const double at = (static_cast<double>(r) + 0.5) / static_cast<double>(members.size());
            data.splits[members[r]] = at < 0.45 ? Split::train : at < 0.55 ? Split::val : Split::test;
        }
    }
    return data;
}

void
write_dataset(const SynthDataset& data, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (std::size_t c = 0; c < data.channels.size(); ++c) {
        save_features(data.channels[c], dir / ("channel" + std::to_string(c) + ".cbvf"));
    }
    save_lists(data.truth.lists, dir / "truth.rel");
    save_candidates(data.truth.candidate_ids, dir / "all.cand");

    std::string splits;
    for (std::size_t i = 0; i < data.splits.size(); ++i) {
        splits += data.truth.candidate_ids[i];
        splits += '\t';
        splits += split_name(data.splits[i]);
        splits += '\n';
    }
    write_file(dir / "splits.txt", splits);

    const auto train = data.train_truth(Split::train);
    save_lists(train.lists, dir / "train.rel");
    save_candidates(train.candidate_ids, dir / "train.cand");
    for (auto split : {Split::val, Split::test}) {
        const std::string name(split_name(split));
        save_lists(data.eval_truth(split).lists, dir / (name + ".rel"));
        save_candidates(data.ids_in(split), dir / (name + ".cand"));
    }
}

}  // namespace cbvrp
