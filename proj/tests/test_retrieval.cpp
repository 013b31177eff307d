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
#include <cmath>
#include <cstdlib>
#include <map>
#include <unordered_set>

#include "cbvrp/error.hpp"
#include "cbvrp/retrieval.hpp"
#include "test_util.hpp"

using namespace cbvrp;

namespace {

FeatureSet
random_set(Rng& rng, const std::string& prefix, std::size_t n, std::size_t dim) {
    FeatureSet set(dim);
    for (std::size_t i = 0; i < n; ++i) {
        set.add(prefix + std::to_string(i), testing::random_vector(rng, dim));
    }
    return set;
}

SimilarityMatrix
one_row(const std::string& query, std::vector<std::pair<std::string, float>> scores) {
    std::vector<ItemId> ids;
    std::vector<float> values;
    for (auto& [id, s] : scores) {
        ids.push_back(id);
        values.push_back(s);
    }
    return SimilarityMatrix({query}, ids, values);
}

}  // namespace

TEST_CASE("cosine similarity basics") {
    const std::vector<float> x{1, 0};
    const std::vector<float> y{0, 1};
    const std::vector<float> a{1, 2};
    const std::vector<float> b{2, 4};
    const std::vector<float> zero{0, 0};
    const std::vector<float> ones{1, 1};
    CHECK(cosine_similarity(x, y) == 0.0);
    CHECK(cosine_similarity(a, b) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cosine_similarity(zero, ones) == 0.0);
    CHECK(cosine_similarity(ones, zero) == 0.0);
    CHECK_THROWS_AS(cosine_similarity(x, std::vector<float>{1, 2, 3}), DimensionError);
}

TEST_CASE("similarity matrix shapes and registries") {
    FeatureSet one(3);
    one.add("v", {0.5F, -2, 1});
    const auto m = similarity_matrix(one, one);
    CHECK(m.rows() == 1);
    CHECK(m(0, 0) == 1.0F);

    FeatureSet basis(2);
    basis.add("e0", {1, 0});
    basis.add("e1", {0, 1});
    const auto id = similarity_matrix(basis, basis);
    CHECK(id(0, 0) == 1.0F);
    CHECK(id(0, 1) == 0.0F);
    CHECK(id(1, 0) == 0.0F);
    CHECK(id(1, 1) == 1.0F);
    CHECK(id.query_ids() == std::vector<ItemId>{"e0", "e1"});

    CHECK_THROWS_AS(similarity_matrix(one, basis), DimensionError);
}

TEST_CASE("cosine scores stay in [-1, 1] and match the scalar formula") {
    Rng rng(21);
    const auto q = random_set(rng, "q", 12, 9);
    const auto c = random_set(rng, "c", 30, 9);
    const auto m = similarity_matrix(q, c);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            CHECK(std::abs(m(i, j)) <= 1.0F + 1e-6F);
            CHECK(m(i, j) == static_cast<float>(cosine_similarity(q.vector(i), c.vector(j))));
        }
    }
}

TEST_CASE("negative squared euclidean metric") {
    FeatureSet s(2);
    s.add("a", {0, 0});
    s.add("b", {3, 4});
    const auto m = similarity_matrix(s, s, SimilarityMetric::neg_squared_euclidean);
    CHECK(m(0, 1) == -25.0F);
    CHECK(m(1, 1) == 0.0F);
    CHECK(parse_similarity_metric("neg-euclidean") == SimilarityMetric::neg_squared_euclidean);
    CHECK_THROWS_AS(parse_similarity_metric("dot"), Error);
}

TEST_CASE("rows are identical for any worker count") {
    Rng rng(31);
    const auto q = random_set(rng, "q", 37, 16);
    const auto c = random_set(rng, "c", 50, 16);
    ::setenv("CBVRP_THREADS", "1", 1);
    const auto serial = similarity_matrix(q, c);
    const auto serial_top = top_k(serial, 7);
    ::setenv("CBVRP_THREADS", "5", 1);
    const auto parallel = similarity_matrix(q, c);
    CHECK(serial == parallel);
    CHECK(top_k(parallel, 7) == serial_top);
    ::unsetenv("CBVRP_THREADS");
}

TEST_CASE("top_k breaks ties by ascending id") {
    const auto m = one_row("q", {{"c", 0.5F}, {"a", 0.9F}, {"b", 0.5F}});
    const auto pred = top_k(m, 2);
    CHECK(pred.lists.list(0) == std::vector<ItemId>{"a", "b"});
}

TEST_CASE("top_k drops the query itself when asked") {
    const auto m = one_row("q", {{"q", 1.0F}, {"x", 0.2F}, {"y", 0.7F}});
    CHECK(top_k(m, 1, true).lists.list(0) == std::vector<ItemId>{"y"});
    CHECK(top_k(m, 1, false).lists.list(0) == std::vector<ItemId>{"q"});
}

TEST_CASE("top_k returns the full ranking when k exceeds the pool") {
    const auto m = one_row("q", {{"q", 1.0F}, {"x", 0.2F}, {"y", 0.7F}});
    CHECK(top_k(m, 10).lists.list(0) == std::vector<ItemId>{"y", "x"});
    CHECK_THROWS_AS(top_k(m, 0), Error);
}

TEST_CASE("top_k depends only on the order of scores in a row") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 5 + rng.below(40);
        std::vector<ItemId> ids = testing::numbered_ids("c", n);
        std::vector<float> scores(n);
        for (auto& s : scores) {
            // Coarse values so ties occur.
            s = static_cast<float>(rng.below(12)) / 4.0F - 1.0F;
        }
        std::vector<float> sorted = scores;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::map<float, float> remap;
        double level = -50.0;
        for (float v : sorted) {
            level += 0.5 + rng.uniform() * 10.0;
            remap[v] = static_cast<float>(level);
        }
        std::vector<float> transformed(n);
        for (std::size_t j = 0; j < n; ++j) {
            transformed[j] = remap[scores[j]];
        }
        const auto k = 1 + rng.below(n);
        CHECK(top_k(SimilarityMatrix({"c3"}, ids, scores), k) ==
              top_k(SimilarityMatrix({"c3"}, ids, transformed), k));
    }
}

TEST_CASE("cosine ranking ignores positive rescaling of a vector") {
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const auto q = random_set(rng, "q", 4, 6);
        const auto c = random_set(rng, "c", 25, 6);
        FeatureSet scaled(6);
        for (std::size_t i = 0; i < c.size(); ++i) {
            auto v = c.vector(i);
            std::vector<float> s(v.begin(), v.end());
            const double factor = std::exp(rng.normal());
            for (auto& x : s) {
                x = static_cast<float>(x * factor);
            }
            scaled.add(c.id(i), std::move(s));
        }
        CHECK(top_k(similarity_matrix(q, c), 10) == top_k(similarity_matrix(q, scaled), 10));
    }
}

TEST_CASE("predictions never repeat ids or contain the query") {
    Rng rng(23);
    const auto items = random_set(rng, "i", 40, 5);
    const auto pred = top_k(similarity_matrix(items, items), 15, true);
    for (const auto& [query, list] : pred.lists.entries()) {
        CHECK(list.size() == 15);
        std::unordered_set<std::string> seen(list.begin(), list.end());
        CHECK(seen.size() == list.size());
        CHECK(seen.count(query) == 0);
    }
}

TEST_CASE("fuse averages matrices") {
    const SimilarityMatrix a({"q"}, {"c"}, {0.2F});
    const SimilarityMatrix b({"q"}, {"c"}, {0.6F});
    const std::vector<SimilarityMatrix> both{a, b};
    CHECK(fuse(both)(0, 0) == doctest::Approx(0.4F).epsilon(1e-7));
    CHECK(fuse(std::vector<SimilarityMatrix>{a}) == a);
    const std::vector<double> first_only{1.0, 0.0};
    CHECK(fuse(both, first_only) == a);
    const std::vector<double> zeros{0.0, 0.0};
    CHECK_THROWS_AS(fuse(both, zeros), Error);
    const std::vector<double> negative{1.0, -1.0};
    CHECK_THROWS_AS(fuse(both, negative), Error);
    const std::vector<double> three{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(fuse(both, three), Error);
    CHECK_THROWS_AS(fuse(std::vector<SimilarityMatrix>{}), Error);
}

TEST_CASE("fuse is idempotent on identical inputs and checks registries") {
    Rng rng(29);
    const auto q = random_set(rng, "q", 6, 4);
    const auto c = random_set(rng, "c", 9, 4);
    const auto m = similarity_matrix(q, c);
    CHECK(fuse(std::vector<SimilarityMatrix>{m, m}) == m);
    const auto other = similarity_matrix(c, c);
    CHECK_THROWS_WITH_AS(fuse(std::vector<SimilarityMatrix>{m, other}),
                         doctest::Contains("registry mismatch"), Error);
}

TEST_CASE("similarity matrix constructor enforces its invariants") {
    CHECK_THROWS_AS(SimilarityMatrix({"q", "q"}, {"c"}, {0.0F, 0.0F}), Error);
    CHECK_THROWS_AS(SimilarityMatrix({"q"}, {"c"}, {0.0F, 1.0F}), DimensionError);
    CHECK_THROWS_AS(SimilarityMatrix({"q"}, {"c"}, {NAN}), Error);
}

TEST_CASE(".cbvs round trip and damage") {
    Rng rng(37);
    const auto q = random_set(rng, "q", 3, 4);
    const auto c = random_set(rng, "c", 5, 4);
    const auto m = similarity_matrix(q, c);
    const auto bytes = encode_similarity(m);
    CHECK(bytes.substr(0, 4) == "CBVS");
    CHECK(bytes[4] == 1);
    CHECK(decode_similarity(bytes) == m);
    for (std::size_t len = 0; len < bytes.size(); ++len) {
        CHECK_THROWS_AS(decode_similarity(std::string_view(bytes).substr(0, len)), FormatError);
    }

    testing::TempDir dir;
    save_similarity(m, dir / "m.cbvs");
    CHECK(load_similarity(dir / "m.cbvs") == m);
}

TEST_CASE("select_items picks and orders items") {
    FeatureSet s(1);
    s.add("a", {1});
    s.add("b", {2});
    s.add("c", {3});
    const std::vector<ItemId> pick{"c", "a"};
    const auto sub = select_items(s, pick);
    CHECK(sub.ids() == pick);
    CHECK(sub.vector(0)[0] == 3.0F);
    const std::vector<ItemId> missing{"z"};
    CHECK_THROWS_AS(select_items(s, missing), Error);
}
