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

#include "cbvrp/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_set>

#include "cbvrp/error.hpp"

namespace cbvrp {

namespace {

void
check_grid(std::span<const std::size_t> grid, const char* name) {
    for (auto k : grid) {
        if (k == 0) {
            throw Error(std::string(name) + " grid contains K = 0");
        }
    }
}

std::string
fixed(double v, int precision) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

std::string
pad(std::string s, std::size_t width) {
    if (s.size() < width) {
        s.append(width - s.size(), ' ');
    }
    return s;
}

constexpr std::size_t kCol = 8;

// Header lines and one value line per report, with `prefix` columns first.
std::string
render_table(const std::vector<std::string>& prefix_names,
             const std::vector<std::vector<std::string>>& prefixes,
             const std::vector<const EvalReport*>& reports) {
    const auto& hit_grid = reports.front()->k_grid_hit;
    const auto& recall_grid = reports.front()->k_grid_recall;
    const std::size_t prefix_width = prefix_names.size() * kCol;

    std::string out;
    out += pad("", prefix_width) + pad("hit@k", hit_grid.size() * kCol) + "| recall@k\n";
    std::string line;
    for (const auto& name : prefix_names) {
        line += pad(name, kCol);
    }
    for (auto k : hit_grid) {
        line += pad("k=" + std::to_string(k), kCol);
    }
    line += "| ";
    for (auto k : recall_grid) {
        line += pad("k=" + std::to_string(k), kCol);
    }
    while (!line.empty() && line.back() == ' ') {
        line.pop_back();
    }
    out += line + "\n";
    out += std::string(line.size(), '-') + "\n";
    for (std::size_t r = 0; r < reports.size(); ++r) {
        line.clear();
        for (const auto& cell : prefixes[r]) {
            line += pad(cell, kCol);
        }
        for (auto k : hit_grid) {
            line += pad(fixed(reports[r]->hit_at.at(k), 4), kCol);
        }
        line += "| ";
        for (auto k : recall_grid) {
            line += pad(fixed(reports[r]->recall_at.at(k), 4), kCol);
        }
        while (!line.empty() && line.back() == ' ') {
            line.pop_back();
        }
        out += line + "\n";
    }
    return out;
}

}  // namespace

std::size_t
overlap_at_k(std::span<const ItemId> truth, std::span<const ItemId> pred, std::size_t k) {
    const std::unordered_set<std::string_view> relevant(truth.begin(), truth.end());
    std::unordered_set<std::string_view> counted;
    const std::size_t n = std::min(k, pred.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (relevant.count(pred[i]) != 0) {
            counted.insert(pred[i]);
        }
    }
    return counted.size();
}

double
recall_at_k(std::span<const ItemId> truth, std::span<const ItemId> pred, std::size_t k) {
    if (truth.empty()) {
        throw Error("recall@K is undefined for an empty ground-truth list");
    }
    if (k == 0) {
        throw Error("K must be positive");
    }
    const std::unordered_set<std::string_view> distinct(truth.begin(), truth.end());
    return static_cast<double>(overlap_at_k(truth, pred, k)) /
           static_cast<double>(distinct.size());
}

int
hit_at_k(std::span<const ItemId> truth, std::span<const ItemId> pred, std::size_t k) {
    if (truth.empty()) {
        throw Error("hit@K is undefined for an empty ground-truth list");
    }
    if (k == 0) {
        throw Error("K must be positive");
    }
    return overlap_at_k(truth, pred, k) > 0 ? 1 : 0;
}

EvalReport
evaluate(const RelevanceTable& truth,
         const PredictionTable& pred,
         std::span<const std::size_t> k_hit,
         std::span<const std::size_t> k_recall) {
    check_grid(k_hit, "hit");
    check_grid(k_recall, "recall");
    EvalReport report;
    report.k_grid_hit.assign(k_hit.begin(), k_hit.end());
    report.k_grid_recall.assign(k_recall.begin(), k_recall.end());
    std::vector<double> hit_sum(k_hit.size(), 0.0);
    std::vector<double> recall_sum(k_recall.size(), 0.0);
    std::vector<std::string> missing;
    std::size_t missing_count = 0;

    for (const auto& [query, list] : truth.lists.entries()) {
        if (list.empty()) {
            ++report.skipped_queries;
            continue;
        }
        const auto* predicted = pred.lists.find(query);
        if (predicted == nullptr) {
            if (missing.size() < 10) {
                missing.push_back(query);
            }
            ++missing_count;
            continue;
        }
        ++report.evaluated_queries;
        for (std::size_t i = 0; i < k_hit.size(); ++i) {
            hit_sum[i] += hit_at_k(list, *predicted, k_hit[i]);
        }
        for (std::size_t i = 0; i < k_recall.size(); ++i) {
            recall_sum[i] += recall_at_k(list, *predicted, k_recall[i]);
        }
    }
    if (missing_count != 0) {
        std::string msg = std::to_string(missing_count) + " queries have no predictions:";
        for (const auto& id : missing) {
            msg += " " + id;
        }
        if (missing_count > missing.size()) {
            msg += " ...";
        }
        throw Error(msg);
    }

    const double n = static_cast<double>(report.evaluated_queries);
    for (std::size_t i = 0; i < k_hit.size(); ++i) {
        report.hit_at[k_hit[i]] = n > 0 ? hit_sum[i] / n : 0.0;
    }
    for (std::size_t i = 0; i < k_recall.size(); ++i) {
        report.recall_at[k_recall[i]] = n > 0 ? recall_sum[i] / n : 0.0;
    }
    return report;
}

std::string
format_report_table(const EvalReport& report) {
    auto out = render_table({}, {{}}, {&report});
    out += "evaluated " + std::to_string(report.evaluated_queries) + " queries; skipped " +
           std::to_string(report.skipped_queries) + " with empty ground truth\n";
    return out;
}

std::string
format_report_kv(const EvalReport& report) {
    std::string out;
    for (auto k : report.k_grid_hit) {
        out += "hit@" + std::to_string(k) + "=" + fixed(report.hit_at.at(k), 6) + "\n";
    }
    for (auto k : report.k_grid_recall) {
        out += "recall@" + std::to_string(k) + "=" + fixed(report.recall_at.at(k), 6) + "\n";
    }
    out += "evaluated_queries=" + std::to_string(report.evaluated_queries) + "\n";
    out += "skipped_queries=" + std::to_string(report.skipped_queries) + "\n";
    return out;
}

std::string
format_sweep_table(std::span<const SweepRow> rows) {
    if (rows.empty()) {
        return {};
    }
    std::vector<std::vector<std::string>> prefixes;
    std::vector<const EvalReport*> reports;
    for (const auto& row : rows) {
        prefixes.push_back({std::to_string(row.embed_dim), std::to_string(row.epochs)});
        reports.push_back(&row.report);
    }
    return render_table({"#dim", "#epoch"}, prefixes, reports);
}

}  // namespace cbvrp
