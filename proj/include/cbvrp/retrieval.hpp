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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cbvrp/datamodel.hpp"

namespace cbvrp {

/// Scores stored as float; every constructor rounds once.
class SimilarityMatrix {
 public:
    SimilarityMatrix() = default;

    /// Rejects duplicate ids in either registry, a wrong score count and
    /// non-finite scores.
    SimilarityMatrix(std::vector<ItemId> query_ids,
                     std::vector<ItemId> candidate_ids,
                     std::vector<float> scores);

    const std::vector<ItemId>&
    query_ids() const noexcept {
        return query_ids_;
    }

    const std::vector<ItemId>&
    candidate_ids() const noexcept {
        return candidate_ids_;
    }

    std::size_t
    rows() const noexcept {
        return query_ids_.size();
    }

    std::size_t
    cols() const noexcept {
        return candidate_ids_.size();
    }

    float
    operator()(std::size_t r, std::size_t c) const {
        return scores_[r * cols() + c];
    }

    std::span<const float>
    row(std::size_t r) const {
        return std::span<const float>(scores_).subspan(r * cols(), cols());
    }

    std::span<const float>
    scores() const noexcept {
        return scores_;
    }

    friend bool
    operator==(const SimilarityMatrix&, const SimilarityMatrix&) = default;

 private:
    std::vector<ItemId> query_ids_;
    std::vector<ItemId> candidate_ids_;
    std::vector<float> scores_;
};

enum class SimilarityMetric {
    cosine,
    /// -|u - v|^2, for ranking straight in the triplet loss geometry.
    neg_squared_euclidean,
};

/// "cosine" / "neg-euclidean".
SimilarityMetric
parse_similarity_metric(std::string_view name);

std::string_view
similarity_metric_name(SimilarityMetric metric);

/// (u . v) / (|u| |v|), or 0 when either vector has zero norm.
double
cosine_similarity(std::span<const float> u, std::span<const float> v);

/// Dense scores of every query against every candidate, rows and columns in
/// input order. Rows are computed in parallel.
SimilarityMatrix
similarity_matrix(const FeatureSet& queries,
                  const FeatureSet& candidates,
                  SimilarityMetric metric = SimilarityMetric::cosine);

/// Top-k candidates per row, best first, ties by ascending id bytes. With
/// `exclude_self` the query's own column is dropped first.
PredictionTable
top_k(const SimilarityMatrix& matrix, std::size_t k, bool exclude_self = true);

/// Entrywise weighted mean. Empty `weights` means uniform. Registries must
/// match exactly.
SimilarityMatrix
fuse(std::span<const SimilarityMatrix> matrices, std::span<const double> weights = {});

/// Subset of `set` with the given ids, in the given order. Throws when an id
/// is missing.
FeatureSet
select_items(const FeatureSet& set, std::span<const ItemId> ids);

std::string
encode_similarity(const SimilarityMatrix& matrix);

SimilarityMatrix
decode_similarity(std::string_view bytes);

void
save_similarity(const SimilarityMatrix& matrix, const std::filesystem::path& path);

SimilarityMatrix
load_similarity(const std::filesystem::path& path);

}  // namespace cbvrp
