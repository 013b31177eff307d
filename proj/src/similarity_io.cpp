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

#include <algorithm>
#include <cmath>

#include "bytes.hpp"
#include "cbvrp/error.hpp"
#include "cbvrp/retrieval.hpp"

namespace cbvrp {

namespace {

constexpr std::string_view kMagic = "CBVS";
constexpr std::uint8_t kVersion = 1;

void
write_ids(detail::ByteWriter& w, const std::vector<ItemId>& ids) {
    for (const auto& id : ids) {
        validate_item_id(id, "cannot save similarity matrix");
        w.u16(static_cast<std::uint16_t>(id.size()));
        w.bytes(id);
    }
}

std::vector<ItemId>
read_ids(detail::ByteReader& r, std::uint32_t count, std::size_t first_record) {
    std::vector<ItemId> ids;
    ids.reserve(std::min<std::size_t>(count, r.remaining() / 2));
    for (std::uint32_t i = 0; i < count; ++i) {
        r.record = first_record + i;
        const auto start = r.offset();
        const auto len = r.u16("id length");
        std::string id(r.bytes(len, "id"));
        if (auto problem = item_id_problem(id); !problem.empty()) {
            throw FormatError(problem, r.record, start);
        }
        ids.push_back(std::move(id));
    }
    return ids;
}

}  // namespace

std::string
encode_similarity(const SimilarityMatrix& matrix) {
    detail::ByteWriter w;
    w.bytes(kMagic);
    w.u8(kVersion);
    w.u32(static_cast<std::uint32_t>(matrix.rows()));
    w.u32(static_cast<std::uint32_t>(matrix.cols()));
    write_ids(w, matrix.query_ids());
    write_ids(w, matrix.candidate_ids());
    for (float s : matrix.scores()) {
        w.f32(s);
    }
    return w.take();
}

// Records are numbered row ids first, then column ids, then one record per
// score row.
SimilarityMatrix
decode_similarity(std::string_view bytes) {
    detail::ByteReader r(bytes);
    if (r.bytes(4, "header") != kMagic) {
        r.fail("bad magic, expected CBVS");
    }
    if (r.u8("header") != kVersion) {
        r.fail("unsupported version");
    }
    const auto rows = r.u32("header");
    const auto cols = r.u32("header");
    auto query_ids = read_ids(r, rows, 1);
    auto candidate_ids = read_ids(r, cols, std::size_t{rows} + 1);
    const std::uint64_t n = static_cast<std::uint64_t>(rows) * cols;
    r.record = std::size_t{rows} + cols + 1;
    if (n * 4 > r.remaining()) {
        r.fail("truncated score block");
    }
    if (n * 4 < r.remaining()) {
        r.fail("trailing bytes after scores");
    }
    std::vector<float> scores(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (cols != 0) {
            r.record = std::size_t{rows} + cols + 1 + i / cols;
        }
        const auto at = r.offset();
        scores[i] = r.f32("scores");
        if (!std::isfinite(scores[i])) {
            throw FormatError("non-finite score", r.record, at);
        }
    }
    try {
        return SimilarityMatrix(std::move(query_ids), std::move(candidate_ids), std::move(scores));
    } catch (const Error& e) {
        throw FormatError(e.what(), 0, 0);
    }
}

void
save_similarity(const SimilarityMatrix& matrix, const std::filesystem::path& path) {
    write_file(path, encode_similarity(matrix));
}

SimilarityMatrix
load_similarity(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    try {
        return decode_similarity(bytes);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.detail(), e.record(), e.offset());
    }
}

}  // namespace cbvrp
