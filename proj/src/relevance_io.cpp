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

#include <unordered_set>

#include "cbvrp/datamodel.hpp"
#include "cbvrp/error.hpp"

namespace cbvrp {

namespace {

// Calls fn(line, record, offset) for every line; a final newline does not
// start an extra record.
template <typename Fn>
void
for_each_line(std::string_view text, Fn&& fn) {
    std::size_t pos = 0;
    std::size_t record = 0;
    while (pos < text.size()) {
        ++record;
        auto nl = text.find('\n', pos);
        auto end = nl == std::string_view::npos ? text.size() : nl;
        auto line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        fn(line, record, pos);
        pos = end + 1;
    }
}

}  // namespace

RankedLists
parse_ranked_lists(std::string_view text, bool allow_self) {
    RankedLists lists;
    for_each_line(text, [&](std::string_view line, std::size_t record, std::size_t offset) {
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw FormatError("expected query<TAB>id list", record, offset);
        }
        std::string query(line.substr(0, tab));
        std::vector<ItemId> ids;
        auto rest = line.substr(tab + 1);
        if (!rest.empty()) {
            while (true) {
                const auto comma = rest.find(',');
                ids.emplace_back(rest.substr(0, comma));
                if (comma == std::string_view::npos) {
                    break;
                }
                rest.remove_prefix(comma + 1);
            }
        }
        try {
            lists.add(std::move(query), std::move(ids), allow_self);
        } catch (const FormatError&) {
            throw;
        } catch (const Error& e) {
            throw FormatError(e.what(), record, offset);
        }
    });
    return lists;
}

std::string
format_ranked_lists(const RankedLists& lists) {
    std::string out;
    for (const auto& [query, list] : lists.entries()) {
        out.append(query);
        out.push_back('\t');
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (i != 0) {
                out.push_back(',');
            }
            out.append(list[i]);
        }
        out.push_back('\n');
    }
    return out;
}

RelevanceTable
load_relevance(const std::filesystem::path& path,
               const std::optional<std::filesystem::path>& candidates_path) {
    RelevanceTable table;
    try {
        table.lists = parse_ranked_lists(read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.detail(), e.record(), e.offset());
    }
    if (candidates_path) {
        table.candidate_ids = load_candidates(*candidates_path);
    } else {
        std::unordered_set<std::string_view> seen;
        auto note = [&](const ItemId& id) {
            if (seen.insert(id).second) {
                table.candidate_ids.push_back(id);
            }
        };
        for (const auto& [query, list] : table.lists.entries()) {
            note(query);
            for (const auto& id : list) {
                note(id);
            }
        }
    }
    table.validate();
    return table;
}

PredictionTable
load_predictions(const std::filesystem::path& path) {
    try {
        return PredictionTable{parse_ranked_lists(read_file(path), true)};
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.detail(), e.record(), e.offset());
    }
}

void
save_lists(const RankedLists& lists, const std::filesystem::path& path) {
    write_file(path, format_ranked_lists(lists));
}

std::vector<ItemId>
load_candidates(const std::filesystem::path& path) {
    std::vector<ItemId> ids;
    std::unordered_set<std::string> seen;
    const auto text = read_file(path);
    for_each_line(text, [&](std::string_view line, std::size_t record, std::size_t offset) {
        if (line.empty()) {
            return;
        }
        if (auto problem = item_id_problem(line); !problem.empty()) {
            throw FormatError(path.string() + ": " + problem, record, offset);
        }
        if (!seen.emplace(line).second) {
            throw FormatError(path.string() + ": duplicate candidate " + std::string(line), record,
                              offset);
        }
        ids.emplace_back(line);
    });
    return ids;
}

void
save_candidates(const std::vector<ItemId>& ids, const std::filesystem::path& path) {
    std::string out;
    for (const auto& id : ids) {
        validate_item_id(id, "cannot save candidate list");
        out.append(id);
        out.push_back('\n');
    }
    write_file(path, out);
}

}  // namespace cbvrp
