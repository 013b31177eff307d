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

// In-process versions of the predict/eval steps on synthetic data.

#include <span>
#include <vector>

#include "cbvrp/metrics.hpp"
#include "cbvrp/retrieval.hpp"
#include "cbvrp/synth.hpp"
#include "cbvrp/trainer.hpp"

namespace cbvrp::testing {

/// Queries of `split` against every item, self excluded.
inline SimilarityMatrix
split_similarity(const SynthDataset& data, const FeatureSet& features,
                 Split split = Split::test) {
    const auto queries = data.ids_in(split);
    return similarity_matrix(select_items(features, queries), features);
}

inline double
recall_of(const SynthDataset& data, const SimilarityMatrix& sim, std::size_t k,
          Split split = Split::test) {
    const std::vector<std::size_t> hit{1};
    const std::vector<std::size_t> recall{k};
    const auto report = evaluate(data.eval_truth(split), top_k(sim, k), hit, recall);
    return report.recall_at.at(k);
}

inline double
baseline_recall(const SynthDataset& data, std::size_t channel, std::size_t k) {
    return recall_of(data, split_similarity(data, data.channels[channel]), k);
}

}  // namespace cbvrp::testing
