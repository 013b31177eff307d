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

#include "cbvrp/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "cbvrp/error.hpp"
#include "cbvrp/kernels.hpp"
#include "cbvrp/parallel.hpp"

namespace cbvrp {

namespace {

void
check_unique(const std::vector<ItemId>& ids, const char* what) {
    std::unordered_set<std::string_view> seen;
    seen.reserve(ids.size());
    for (const auto& id : ids) {
        if (!seen.insert(id).second) {
            throw Error(std::string("duplicate ") + what + " id " + id);
        }
    }
}

double
cosine_from_parts(double dot, double norm_u, double norm_v) {
    if (norm_u == 0.0 || norm_v == 0.0) {
        return 0.0;
    }
    return std::clamp(dot / (norm_u * norm_v), -1.0, 1.0);
}

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::vector<ItemId> query_ids,
                                   std::vector<ItemId> candidate_ids,
                                   std::vector<float> scores)
    : query_ids_(std::move(query_ids)),
      candidate_ids_(std::move(candidate_ids)),
      scores_(std::move(scores)) {
    check_unique(query_ids_, "query");
    check_unique(candidate_ids_, "candidate");
    if (scores_.size() != query_ids_.size() * candidate_ids_.size()) {
        throw DimensionError("similarity matrix has " + std::to_string(scores_.size()) +
                             " scores for " + std::to_string(query_ids_.size()) + "x" +
                             std::to_string(candidate_ids_.size()));
    }
    for (float s : scores_) {
        if (!std::isfinite(s)) {
            throw Error("non-finite similarity score");
        }
    }
}

SimilarityMetric
parse_similarity_metric(std::string_view name) {
    if (name == "cosine") {
        return SimilarityMetric::cosine;
    }
    if (name == "neg-euclidean") {
        return SimilarityMetric::neg_squared_euclidean;
    }
    throw Error("unknown similarity metric '" + std::string(name) +
                "' (expected cosine or neg-euclidean)");
}

std::string_view
similarity_metric_name(SimilarityMetric metric) {
    return metric == SimilarityMetric::cosine ? "cosine" : "neg-euclidean";
}

double
cosine_similarity(std::span<const float> u, std::span<const float> v) {
    const double uv = kernels::dot(u, v);
    return cosine_from_parts(uv, std::sqrt(kernels::dot(u, u)), std::sqrt(kernels::dot(v, v)));
}

SimilarityMatrix
similarity_matrix(const FeatureSet& queries, const FeatureSet& candidates, SimilarityMetric metric) {
    if (queries.dim() != candidates.dim()) {
        throw DimensionError("query dim " + std::to_string(queries.dim()) +
                             " does not match candidate dim " + std::to_string(candidates.dim()));
    }
    const std::size_t rows = queries.size();
    const std::size_t cols = candidates.size();
    std::vector<double> cand_norms(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        auto c = candidates.vector(j);
        cand_norms[j] = std::sqrt(kernels::dot(c, c));
    }
    std::vector<float> scores(rows * cols);
    parallel_for(rows, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto q = queries.vector(i);
            const double qn = std::sqrt(kernels::dot(q, q));
            float* out = scores.data() + i * cols;
            for (std::size_t j = 0; j < cols; ++j) {
                auto c = candidates.vector(j);
                const double s = metric == SimilarityMetric::cosine
                                     ? cosine_from_parts(kernels::dot(q, c), qn, cand_norms[j])
                                     : -kernels::squared_distance(q, c);
                out[j] = static_cast<float>(s);
            }
        }
    });
    return SimilarityMatrix(queries.ids(), candidates.ids(), std::move(scores));
}

PredictionTable
top_k(const SimilarityMatrix& matrix, std::size_t k, bool exclude_self) {
    if (k == 0) {
        throw Error("k must be positive");
    }
    const auto& cands = matrix.candidate_ids();
    std::unordered_map<std::string_view, std::size_t> column;
    column.reserve(cands.size());
    for (std::size_t j = 0; j < cands.size(); ++j) {
        column.emplace(cands[j], j);
    }

    std::vector<std::vector<ItemId>> lists(matrix.rows());
    parallel_for(matrix.rows(), [&](std::size_t begin, std::size_t end) {
        std::vector<std::size_t> order;
        for (std::size_t i = begin; i < end; ++i) {
            order.resize(cands.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            if (exclude_self) {
                if (auto it = column.find(matrix.query_ids()[i]); it != column.end()) {
                    order.erase(order.begin() + static_cast<std::ptrdiff_t>(it->second));
                }
            }
            const auto row = matrix.row(i);
            auto better = [&](std::size_t a, std::size_t b) {
                if (row[a] != row[b]) {
                    return row[a] > row[b];
                }
                return cands[a] < cands[b];
            };
            const std::size_t take = std::min(k, order.size());
            std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                              order.end(), better);
            auto& list = lists[i];
            list.reserve(take);
            for (std::size_t r = 0; r < take; ++r) {
                list.push_back(cands[order[r]]);
            }
        }
    });

    PredictionTable out;
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        out.lists.add(matrix.query_ids()[i], std::move(lists[i]), true);
    }
    return out;
}

SimilarityMatrix
fuse(std::span<const SimilarityMatrix> matrices, std::span<const double> weights) {
    if (matrices.empty()) {
        throw Error("fuse needs at least one similarity matrix");
    }
    if (!weights.empty() && weights.size() != matrices.size()) {
        throw Error("fuse: " + std::to_string(weights.size()) + " weights for " +
                    std::to_string(matrices.size()) + " matrices");
    }
    const auto& first = matrices.front();
    for (std::size_t m = 1; m < matrices.size(); ++m) {
        if (matrices[m].query_ids() != first.query_ids() ||
            matrices[m].candidate_ids() != first.candidate_ids()) {
            throw Error("registry mismatch between similarity matrices 1 and " +
                        std::to_string(m + 1));
        }
    }
    std::vector<double> w(matrices.size(), 1.0);
    if (!weights.empty()) {
        w.assign(weights.begin(), weights.end());
    }
    double total = 0.0;
    for (double x : w) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw Error("fusion weights must be finite and non-negative");
        }
        total += x;
    }
    if (!(total > 0.0)) {
        throw Error("fusion weights sum to zero");
    }

    std::vector<float> scores(first.scores().size());
    for (std::size_t e = 0; e < scores.size(); ++e) {
        double acc = 0.0;
        for (std::size_t m = 0; m < matrices.size(); ++m) {
            acc += w[m] * static_cast<double>(matrices[m].scores()[e]);
        }
        scores[e] = static_cast<float>(acc / total);
    }
    return SimilarityMatrix(first.query_ids(), first.candidate_ids(), std::move(scores));
}

FeatureSet
select_items(const FeatureSet& set, std::span<const ItemId> ids) {
    FeatureSet out(set.dim());
    for (const auto& id : ids) {
        auto idx = set.find(id);
        if (!idx) {
            throw Error("item " + id + " has no feature vector");
        }
        auto v = set.frames(*idx);
        out.add(id, std::vector<float>(v.begin(), v.end()));
    }
    return out;
}

}  // namespace cbvrp
