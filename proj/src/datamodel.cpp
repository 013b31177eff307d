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

#include "cbvrp/datamodel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <unordered_set>

#include "cbvrp/error.hpp"

namespace cbvrp {

std::string
item_id_problem(std::string_view id) {
    if (id.empty()) {
        return "empty id";
    }
    if (id.size() > kMaxItemIdBytes) {
        return "id longer than 255 bytes";
    }
    for (char c : id) {
        if (c == '\t' || c == ',' || c == '\n' || c == '\r') {
            return "reserved character in id";
        }
    }
    return {};
}

void
validate_item_id(std::string_view id, std::string_view context) {
    auto problem = item_id_problem(id);
    if (!problem.empty()) {
        throw Error(std::string(context) + ": " + problem + " '" + std::string(id) + "'");
    }
}

FeatureSet::FeatureSet(std::size_t dim) : dim_(dim) {
    if (dim == 0) {
        throw DimensionError("feature dimension must be positive");
    }
}

void
FeatureSet::add(ItemId id, std::vector<float> frames) {
    validate_item_id(id, "feature set");
    if (frames.empty() || frames.size() % dim_ != 0) {
        throw DimensionError("item " + id + ": " + std::to_string(frames.size()) +
                             " values is not a positive multiple of dim " +
                             std::to_string(dim_));
    }
    for (float v : frames) {
        if (!std::isfinite(v)) {
            throw Error("item " + id + ": non-finite feature value");
        }
    }
    if (index_.count(id) != 0) {
        throw Error("duplicate item id " + id);
    }
    if (frames.size() != dim_) {
        ++multi_frame_items_;
    }
    index_.emplace(id, items_.size());
    items_.push_back(Item{std::move(id), std::move(frames)});
}

std::span<const float>
FeatureSet::frame(std::size_t index, std::size_t frame) const {
    const auto& values = items_.at(index).values;
    if ((frame + 1) * dim_ > values.size()) {
        throw std::out_of_range("frame index out of range");
    }
    return std::span<const float>(values).subspan(frame * dim_, dim_);
}

std::span<const float>
FeatureSet::vector(std::size_t index) const {
    const auto& values = items_.at(index).values;
    if (values.size() != dim_) {
        throw Error("item " + items_[index].id + " has " + std::to_string(values.size() / dim_) +
                    " frames; mean_pool the set first");
    }
    return values;
}

std::optional<std::size_t>
FeatureSet::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<ItemId>
FeatureSet::ids() const {
    std::vector<ItemId> out;
    out.reserve(items_.size());
    for (const auto& item : items_) {
        out.push_back(item.id);
    }
    return out;
}

bool
operator==(const FeatureSet& a, const FeatureSet& b) {
    if (a.dim_ != b.dim_ || a.items_.size() != b.items_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.items_.size(); ++i) {
        const auto& x = a.items_[i];
        const auto& y = b.items_[i];
        if (x.id != y.id || x.values.size() != y.values.size()) {
            return false;
        }
        // Bitwise payload comparison: -0.0 and 0.0 differ on disk.
        for (std::size_t j = 0; j < x.values.size(); ++j) {
            if (std::bit_cast<std::uint32_t>(x.values[j]) !=
                std::bit_cast<std::uint32_t>(y.values[j])) {
                return false;
            }
        }
    }
    return true;
}

FeatureSet
mean_pool(const FeatureSet& set) {
    const std::size_t dim = set.dim();
    FeatureSet out(dim);
    std::vector<double> acc(dim);
    for (std::size_t i = 0; i < set.size(); ++i) {
        const std::size_t frames = set.frame_count(i);
        if (frames == 1) {
            auto v = set.frame(i, 0);
            out.add(set.id(i), std::vector<float>(v.begin(), v.end()));
            continue;
        }
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t f = 0; f < frames; ++f) {
            auto v = set.frame(i, f);
            for (std::size_t j = 0; j < dim; ++j) {
                acc[j] += static_cast<double>(v[j]);
            }
        }
        std::vector<float> mean(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            mean[j] = static_cast<float>(acc[j] / static_cast<double>(frames));
        }
        out.add(set.id(i), std::move(mean));
    }
    return out;
}

void
RankedLists::add(ItemId query, std::vector<ItemId> list, bool allow_self) {
    validate_item_id(query, "query id");
    if (index_.count(query) != 0) {
        throw Error("duplicate query " + query);
    }
    std::unordered_set<std::string_view> seen;
    seen.reserve(list.size());
    for (const auto& id : list) {
        validate_item_id(id, "list of " + query);
        if (id == query && !allow_self) {
            throw Error("self-reference in relevance list of " + query);
        }
        if (!seen.insert(id).second) {
            throw Error("duplicate id " + id + " in relevance list of " + query);
        }
    }
    index_.emplace(query, entries_.size());
    entries_.emplace_back(std::move(query), std::move(list));
}

const std::vector<ItemId>*
RankedLists::find(std::string_view query) const {
    auto it = index_.find(std::string(query));
    if (it == index_.end()) {
        return nullptr;
    }
    return &entries_[it->second].second;
}

void
RelevanceTable::validate() const {
    std::unordered_set<std::string_view> pool;
    pool.reserve(candidate_ids.size());
    for (const auto& id : candidate_ids) {
        validate_item_id(id, "candidate id");
        if (!pool.insert(id).second) {
            throw Error("duplicate candidate id " + id);
        }
    }
    for (const auto& [query, list] : lists.entries()) {
        for (const auto& id : list) {
            if (pool.count(id) == 0) {
                throw Error("id " + id + " in relevance list of " + query +
                            " is not in the candidate set");
            }
        }
    }
}

std::string
read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw Error("read failure on " + path.string());
    }
    return bytes;
}

void
write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
        throw Error("write failure on " + path.string());
    }
}

}  // namespace cbvrp
