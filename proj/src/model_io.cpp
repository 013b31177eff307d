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

#include <cmath>

#include "bytes.hpp"
#include "cbvrp/error.hpp"
#include "cbvrp/trainer.hpp"

namespace cbvrp {

namespace {
constexpr std::string_view kMagic = "CBVM";
constexpr std::uint8_t kVersion = 1;
}  // namespace

std::string
encode_model(const EmbeddingModel& model) {
    detail::ByteWriter w;
    w.bytes(kMagic);
    w.u8(kVersion);
    w.u32(static_cast<std::uint32_t>(model.input_dim()));
    w.u32(static_cast<std::uint32_t>(model.embed_dim()));
    w.f32(static_cast<float>(model.meta.margin));
    w.u32(model.meta.epochs);
    w.u64(model.meta.seed);
    for (double v : model.weight.data()) {
        w.f32(static_cast<float>(v));
    }
    return w.take();
}

EmbeddingModel
decode_model(std::string_view bytes) {
    detail::ByteReader r(bytes);
    if (r.bytes(4, "header") != kMagic) {
        r.fail("bad magic, expected CBVM");
    }
    if (r.u8("header") != kVersion) {
        r.fail("unsupported version");
    }
    const auto input_dim = r.u32("header");
    const auto embed_dim = r.u32("header");
    if (input_dim == 0 || embed_dim == 0) {
        r.fail("model dimensions must be positive");
    }
    EmbeddingModel model;
    model.meta.margin = r.f32("header");
    model.meta.epochs = r.u32("header");
    model.meta.seed = r.u64("header");
    if (!std::isfinite(model.meta.margin) || model.meta.margin < 0.0) {
        r.fail("invalid margin");
    }
    const std::uint64_t n = static_cast<std::uint64_t>(input_dim) * embed_dim;
    if (n * 4 != r.remaining()) {
        r.fail(n * 4 > r.remaining() ? "truncated weight matrix" : "trailing bytes after weights");
    }
    model.weight = Matrix(embed_dim, input_dim);
    r.record = 1;
    for (double& v : model.weight.data()) {
        const auto at = r.offset();
        v = r.f32("weights");
        if (!std::isfinite(v)) {
            throw FormatError("non-finite weight", r.record, at);
        }
    }
    return model;
}

void
save_model(const EmbeddingModel& model, const std::filesystem::path& path) {
    write_file(path, encode_model(model));
}

EmbeddingModel
load_model(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    try {
        return decode_model(bytes);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.detail(), e.record(), e.offset());
    }
}

}  // namespace cbvrp
