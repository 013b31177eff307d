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

#include <doctest.h>

#include <algorithm>
#include <set>

#include "cbvrp/error.hpp"
#include "cbvrp/synth.hpp"
#include "pipeline.hpp"
#include "test_util.hpp"

using namespace cbvrp;

namespace {

SynthConfig
small_config(std::uint64_t seed = 0) {
    SynthConfig sc;
    sc.n_items = 120;
    sc.n_clusters = 6;
    sc.raw_dim = 16;
    sc.latent_dim = 8;
    sc.truth_len = 10;
    sc.seed = seed;
    return sc;
}

}  // namespace

TEST_CASE("config validation") {
    SynthConfig sc;
    CHECK_NOTHROW(sc.validate());
    sc.truth_len = sc.n_items;
    CHECK_THROWS_WITH_AS(sc.validate(), doctest::Contains("M ≥ n_items"), Error);
    sc = SynthConfig{};
    sc.n_clusters = sc.n_items + 1;
    CHECK_THROWS_AS(sc.validate(), Error);
    sc = SynthConfig{};
    sc.noise_sigma = -0.1;
    CHECK_THROWS_AS(sc.validate(), Error);
    sc = SynthConfig{};
    sc.raw_dim = 0;
    CHECK_THROWS_AS(generate(sc), Error);
}

TEST_CASE("without noise each list starts with the whole cluster") {
    auto sc = small_config();
    sc.noise_sigma = 0.0;
    sc.truth_len = 30;
    const auto data = generate(sc);
    const std::size_t per_cluster = sc.n_items / sc.n_clusters;
    for (std::size_t i = 0; i < sc.n_items; ++i) {
        const auto& list = data.truth.lists.list(i);
        std::vector<std::size_t> mates;
        for (std::size_t j = 0; j < sc.n_items; ++j) {
            if (j != i && data.cluster[j] == data.cluster[i]) {
                mates.push_back(j);
            }
        }
        REQUIRE(mates.size() == per_cluster - 1);
        // Equal distances fall back to ascending id, which is index order.
        for (std::size_t r = 0; r < mates.size(); ++r) {
            CHECK(list[r] == data.truth.candidate_ids[mates[r]]);
        }
        // Same latent point, same features in every channel.
        for (const auto& channel : data.channels) {
            const auto a = channel.vector(i);
            const auto b = channel.vector(mates.front());
            CHECK(std::equal(a.begin(), a.end(), b.begin()));
        }
    }
}

TEST_CASE("same seed gives identical files, another seed does not") {
    testing::TempDir a;
    testing::TempDir b;
    testing::TempDir c;
    write_dataset(generate(small_config(5)), a.path());
    write_dataset(generate(small_config(5)), b.path());
    write_dataset(generate(small_config(6)), c.path());
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
        const auto name = entry.path().filename().string();
        CHECK(read_file(entry.path()) == read_file(b / name));
        ++files;
    }
    CHECK(files == 11);
    CHECK(read_file(a / "channel0.cbvf") != read_file(c / "channel0.cbvf"));
}

TEST_CASE("truth lists have the right length and never contain the query") {
    for (std::size_t m : {1, 10, 119}) {
        auto sc = small_config(3);
        sc.truth_len = m;
        const auto data = generate(sc);
        CHECK_NOTHROW(data.truth.validate());
        for (const auto& [query, list] : data.truth.lists.entries()) {
            CHECK(list.size() == m);
            CHECK(std::find(list.begin(), list.end(), query) == list.end());
        }
    }
}

TEST_CASE("channels share one registry and the split is balanced per cluster") {
    const auto data = generate(SynthConfig{});
    REQUIRE(data.channels.size() == 2);
    CHECK(data.channels[0].ids() == data.channels[1].ids());
    CHECK(data.channels[0].ids() == data.ids());
    CHECK(data.ids_in(Split::train).size() == 220);
    CHECK(data.ids_in(Split::val).size() == 60);
    CHECK(data.ids_in(Split::test).size() == 220);
    for (std::size_t c = 0; c < 20; ++c) {
        std::size_t counts[3] = {0, 0, 0};
        for (std::size_t i = 0; i < data.splits.size(); ++i) {
            if (data.cluster[i] == c) {
                ++counts[static_cast<int>(data.splits[i])];
            }
        }
        CHECK(counts[0] == 11);
        CHECK(counts[1] == 3);
        CHECK(counts[2] == 11);
    }
}

TEST_CASE("training truth stays inside the training split") {
    const auto data = generate(small_config(2));
    const auto train = data.train_truth();
    CHECK_NOTHROW(train.validate());
    const auto members = data.ids_in(Split::train);
    const std::set<ItemId> allowed(members.begin(), members.end());
    CHECK(train.lists.size() == members.size());
    for (const auto& [query, list] : train.lists.entries()) {
        CHECK(allowed.count(query) == 1);
        for (const auto& id : list) {
            CHECK(allowed.count(id) == 1);
        }
    }
}

TEST_CASE("raw cosine is well above random ranking on the default data") {
    // Random ranking recovers 50 of the 499 other items on average.
    const double random_recall = 50.0 / 499.0;
    double mean[2] = {0.0, 0.0};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        SynthConfig sc;
        sc.seed = seed;
        const auto data = generate(sc);
        for (std::size_t channel = 0; channel < 2; ++channel) {
            const double r = testing::baseline_recall(data, channel, 50);
            MESSAGE("seed " << seed << " channel " << channel << " recall@50 " << r);
            CHECK(r > 4.0 * random_recall);
            mean[channel] += r / 5.0;
        }
    }
    CHECK(mean[0] > 5.0 * random_recall);
    CHECK(mean[1] > 5.0 * random_recall);
}

TEST_CASE("more noise never helps the raw cosine baseline") {
    double previous = 2.0;
    for (double sigma : {0.0, 0.25, 0.5, 1.0, 2.0}) {
        double mean = 0.0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            SynthConfig sc;
            sc.noise_sigma = sigma;
            sc.seed = seed;
            mean += testing::baseline_recall(generate(sc), 0, 50) / 5.0;
        }
        MESSAGE("sigma " << sigma << " recall@50 " << mean);
        CHECK(mean <= previous);
        previous = mean;
    }
}
