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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cbvrp {

using ItemId = std::string;

inline constexpr std::size_t kMaxItemIdBytes = 255;

/// Returns an empty string when `id` is a valid item id, otherwise a short
/// reason ("empty", "too long", "reserved character").
std::string
item_id_problem(std::string_view id);

/// Throws cbvrp::Error naming `context` when `id` is not a valid item id.
void
validate_item_id(std::string_view id, std::string_view context);

/// Item id → one or more `dim`-length float vectors, in insertion order.
///
/// Vectors for one item ("frames") are stored contiguously. A set is pooled
/// when every item has exactly one vector; the empty set counts as pooled.
class FeatureSet {
 public:
    explicit FeatureSet(std::size_t dim);

    /// Appends an item. `frames` holds F*dim values, F >= 1. Rejects
    /// duplicate ids, invalid ids, ragged input and non-finite values.
    void
    add(ItemId id, std::vector<float> frames);

    std::size_t
    dim() const noexcept {
        return dim_;
    }

    std::size_t
    size() const noexcept {
        return items_.size();
    }

    bool
    empty() const noexcept {
        return items_.empty();
    }

    bool
    pooled() const noexcept {
        return multi_frame_items_ == 0;
    }

    const ItemId&
    id(std::size_t index) const {
        return items_.at(index).id;
    }

    std::size_t
    frame_count(std::size_t index) const {
        return items_.at(index).values.size() / dim_;
    }

    std::span<const float>
    frame(std::size_t index, std::size_t frame) const;

    /// All frames of an item, flattened.
    std::span<const float>
    frames(std::size_t index) const {
        return items_.at(index).values;
    }

    /// The single vector of an item in a pooled set.
    std::span<const float>
    vector(std::size_t index) const;

    std::optional<std::size_t>
    find(std::string_view id) const;

    bool
    contains(std::string_view id) const {
        return find(id).has_value();
    }

    std::vector<ItemId>
    ids() const;

    friend bool
    operator==(const FeatureSet& a, const FeatureSet& b);

 private:
    struct Item {
        ItemId id;
        std::vector<float> values;
    };

    std::size_t dim_;
    std::vector<Item> items_;
    std::unordered_map<ItemId, std::size_t> index_;
    std::size_t multi_frame_items_ = 0;
};

/// Component-wise mean over each item's frames. Sums in frame order with
/// double accumulation, then rounds once to float.
FeatureSet
mean_pool(const FeatureSet& set);

/// Ordered query id → ordered id list. Shared by relevance and prediction
/// tables, which use the same on-disk format.
class RankedLists {
 public:
    /// Rejects duplicate queries and duplicate ids in a list. A list naming
    /// its own query is refused unless `allow_self`; ground truth never does
    /// that, predictions made with self-retrieval kept on may.
    void
    add(ItemId query, std::vector<ItemId> list, bool allow_self = false);

    std::size_t
    size() const noexcept {
        return entries_.size();
    }

    bool
    empty() const noexcept {
        return entries_.empty();
    }

    const ItemId&
    query(std::size_t index) const {
        return entries_.at(index).first;
    }

    const std::vector<ItemId>&
    list(std::size_t index) const {
        return entries_.at(index).second;
    }

    /// nullptr when `query` has no entry.
    const std::vector<ItemId>*
    find(std::string_view query) const;

    const std::vector<std::pair<ItemId, std::vector<ItemId>>>&
    entries() const noexcept {
        return entries_;
    }

    friend bool
    operator==(const RankedLists& a, const RankedLists& b) {
        return a.entries_ == b.entries_;
    }

 private:
    std::vector<std::pair<ItemId, std::vector<ItemId>>> entries_;
    std::unordered_map<ItemId, std::size_t> index_;
};

/// Ground truth: per query r, its relevance list o^r, plus the candidate
/// pool every list draws from.
struct RelevanceTable {
    RankedLists lists;
    std::vector<ItemId> candidate_ids;

    /// Checks that every listed id is a candidate and candidates are unique.
    void
    validate() const;

    friend bool
    operator==(const RelevanceTable&, const RelevanceTable&) = default;
};

/// Predicted top-K lists, one per query.
struct PredictionTable {
    RankedLists lists;

    friend bool
    operator==(const PredictionTable&, const PredictionTable&) = default;
};

enum class FeatureFormat { binary, text };

/// `.cbvt` → text, everything else → binary.
FeatureFormat
feature_format_for(const std::filesystem::path& path);

FeatureSet
load_features(const std::filesystem::path& path, FeatureFormat format);

FeatureSet
load_features(const std::filesystem::path& path);

void
save_features(const FeatureSet& set, const std::filesystem::path& path, FeatureFormat format);

void
save_features(const FeatureSet& set, const std::filesystem::path& path);

/// In-memory codecs behind load/save_features.
std::string
encode_features(const FeatureSet& set, FeatureFormat format);

FeatureSet
decode_features(std::string_view bytes, FeatureFormat format);

RankedLists
parse_ranked_lists(std::string_view text, bool allow_self = false);

std::string
format_ranked_lists(const RankedLists& lists);

/// Loads a `.rel` file. Without `candidates_path` the candidate pool is every
/// id in the file in order of first appearance.
RelevanceTable
load_relevance(const std::filesystem::path& path,
               const std::optional<std::filesystem::path>& candidates_path = std::nullopt);

PredictionTable
load_predictions(const std::filesystem::path& path);

void
save_lists(const RankedLists& lists, const std::filesystem::path& path);

std::vector<ItemId>
load_candidates(const std::filesystem::path& path);

void
save_candidates(const std::vector<ItemId>& ids, const std::filesystem::path& path);

/// Whole-file helpers; throw cbvrp::Error with the path on failure.
std::string
read_file(const std::filesystem::path& path);

void
write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace cbvrp
