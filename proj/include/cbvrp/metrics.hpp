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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cbvrp/datamodel.hpp"

namespace cbvrp {

/// Default reporting grids for hit@K and recall@K.
inline const std::vector<std::size_t> kDefaultHitGrid{5, 10, 20, 30};
inline const std::vector<std::size_t> kDefaultRecallGrid{50, 100, 200, 300};

/// |set(truth) ∩ set(first k of pred)|.
std::size_t
overlap_at_k(std::span<const ItemId> truth, std::span<const ItemId> pred, std::size_t k);

/// overlap / |truth|. Throws on an empty truth list or k == 0.
double
recall_at_k(std::span<const ItemId> truth, std::span<const ItemId> pred, std::size_t k);

/// 1 when any truth item is in the first k predictions, else 0.
int
hit_at_k(std::span<const ItemId> truth, std::span<const ItemId> pred, std::size_t k);

struct EvalReport {
    std::vector<std::size_t> k_grid_hit;
    std::vector<std::size_t> k_grid_recall;
    std::map<std::size_t, double> hit_at;
    std::map<std::size_t, double> recall_at;
    std::size_t evaluated_queries = 0;
    /// Queries whose ground-truth list is empty; recall is undefined there.
    std::size_t skipped_queries = 0;
};

/// Averages hit@K and recall@K over every truth query with a non-empty list.
/// A query with ground truth but no prediction entry is an error.
EvalReport
evaluate(const RelevanceTable& truth,
         const PredictionTable& pred,
         std::span<const std::size_t> k_hit = kDefaultHitGrid,
         std::span<const std::size_t> k_recall = kDefaultRecallGrid);

/// Fixed-width table: a hit@k group then a recall@k group, one column per K.
std::string
format_report_table(const EvalReport& report);

/// `hit@5=0.253000` style lines plus the query counts.
std::string
format_report_kv(const EvalReport& report);

struct SweepRow {
    std::size_t embed_dim;
    std::size_t epochs;
    EvalReport report;
};

/// The dim x epoch table: `#dim #epoch` columns followed by the two groups.
std::string
format_sweep_table(std::span<const SweepRow> rows);

}  // namespace cbvrp
