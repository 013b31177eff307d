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

#include <charconv>
#include <cmath>
#include <unordered_set>

#include "bytes.hpp"
#include "cbvrp/datamodel.hpp"
#include "cbvrp/error.hpp"

namespace cbvrp {

namespace {

constexpr std::string_view kMagic = "CBVF";
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kPooledFlag = 0x01;

void
check_ids_writable(const FeatureSet& set) {
    for (std::size_t i = 0; i < set.size(); ++i) {
        validate_item_id(set.id(i), "cannot save feature set");
    }
}

std::string
encode_binary(const FeatureSet& set) {
    detail::ByteWriter w;
    w.bytes(kMagic);
    w.u8(kVersion);
    w.u8(set.pooled() ? kPooledFlag : 0);
    w.u16(0);
    w.u32(static_cast<std::uint32_t>(set.size()));
    w.u32(static_cast<std::uint32_t>(set.dim()));
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& id = set.id(i);
        w.u16(static_cast<std::uint16_t>(id.size()));
        w.bytes(id);
        w.u32(static_cast<std::uint32_t>(set.frame_count(i)));
        for (float v : set.frames(i)) {
            w.f32(v);
        }
    }
    return w.take();
}

FeatureSet
decode_binary(std::string_view bytes) {
    detail::ByteReader r(bytes);
    if (r.bytes(4, "header") != kMagic) {
        r.fail("bad magic, expected CBVF");
    }
    if (r.u8("header") != kVersion) {
        r.fail("unsupported version");
    }
    const auto flags = r.u8("header");
    if ((flags & ~kPooledFlag) != 0) {
        r.fail("unknown flag bits");
    }
    if (r.u16("header") != 0) {
        r.fail("reserved header bytes are not zero");
    }
    const std::uint32_t count = r.u32("header");
    const std::uint32_t dim = r.u32("header");
    if (dim == 0) {
        r.fail("dimension must be positive");
    }

    FeatureSet set(dim);
    std::unordered_set<std::string> seen;
    for (std::uint32_t n = 0; n < count; ++n) {
        r.record = n + 1;
        const auto start = r.offset();
        const auto id_len = r.u16("record id length");
        std::string id(r.bytes(id_len, "record id"));
        if (auto problem = item_id_problem(id); !problem.empty()) {
            throw FormatError(problem, r.record, start);
        }
        if (!seen.insert(id).second) {
            throw FormatError("duplicate item id " + id, r.record, start);
        }
        const auto frames = r.u32("frame count");
        if (frames == 0) {
            r.fail("zero frame count");
        }
        if ((flags & kPooledFlag) != 0 && frames != 1) {
            r.fail("frame count " + std::to_string(frames) + " in a pooled file");
        }
        const std::uint64_t n_values = static_cast<std::uint64_t>(frames) * dim;
        if (n_values * 4 > r.remaining()) {
            r.fail("truncated vector payload");
        }
        std::vector<float> values(static_cast<std::size_t>(n_values));
        for (auto& v : values) {
            const auto at = r.offset();
            v = r.f32("vector payload");
            if (!std::isfinite(v)) {
                throw FormatError("non-finite value", r.record, at);
            }
        }
        set.add(std::move(id), std::move(values));
    }
    if (r.remaining() != 0) {
        r.record = count + 1;
        r.fail("trailing bytes after last record");
    }
    return set;
}

std::string
encode_text(const FeatureSet& set) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t f = 0; f < set.frame_count(i); ++f) {
            out.append(set.id(i));
            out.push_back('\t');
            out.append(std::to_string(f));
            out.push_back('\t');
            bool first = true;
            for (float v : set.frame(i, f)) {
                if (!first) {
                    out.push_back(',');
                }
                first = false;
                auto res = std::to_chars(buf, buf + sizeof(buf), v);
                out.append(buf, res.ptr);
            }
            out.push_back('\n');
        }
    }
    return out;
}

FeatureSet
decode_text(std::string_view text) {
    std::optional<FeatureSet> set;
    std::unordered_set<std::string> seen;
    std::string current;
    std::vector<float> current_values;
    std::size_t current_frames = 0;

    auto flush = [&]() {
        if (!current.empty()) {
            set->add(std::move(current), std::move(current_values));
            current.clear();
            current_values.clear();
            current_frames = 0;
        }
    };

    std::size_t pos = 0;
    std::size_t record = 0;
    while (pos < text.size()) {
        ++record;
        const std::size_t line_start = pos;
        auto nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        auto fail = [&](const std::string& what) {
            throw FormatError(what, record, line_start);
        };

        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
        if (tab2 == std::string_view::npos) {
            fail("expected id<TAB>frame<TAB>values");
        }
        std::string id(line.substr(0, tab1));
        if (auto problem = item_id_problem(id); !problem.empty()) {
            fail(problem);
        }
        const auto frame_field = line.substr(tab1 + 1, tab2 - tab1 - 1);
        std::size_t frame_index = 0;
        auto fr = std::from_chars(frame_field.data(), frame_field.data() + frame_field.size(),
                                  frame_index);
        if (fr.ec != std::errc{} || fr.ptr != frame_field.data() + frame_field.size()) {
            fail("bad frame index");
        }

        std::vector<float> values;
        auto rest = line.substr(tab2 + 1);
        while (true) {
            const auto comma = rest.find(',');
            const auto tok = rest.substr(0, comma);
            float v = 0.0F;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || tok.empty()) {
                fail("bad float '" + std::string(tok) + "'");
            }
            if (!std::isfinite(v)) {
                fail("non-finite value");
            }
            values.push_back(v);
            if (comma == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(comma + 1);
        }

        if (!set) {
            set.emplace(values.size());
        } else if (values.size() != set->dim()) {
            fail("dimension mismatch (" + std::to_string(values.size()) + " values, expected " +
                 std::to_string(set->dim()) + ")");
        }

        if (id != current) {
            flush();
            if (!seen.insert(id).second) {
                fail("duplicate item id " + id);
            }
            current = id;
        }
        if (frame_index != current_frames) {
            fail("frame index " + std::to_string(frame_index) + " for " + id + ", expected " +
                 std::to_string(current_frames));
        }
        current_values.insert(current_values.end(), values.begin(), values.end());
        ++current_frames;
    }
    if (!set) {
        throw FormatError("empty text feature file", 0, 0);
    }
    flush();
    return std::move(*set);
}

}  // namespace

FeatureFormat
feature_format_for(const std::filesystem::path& path) {
    return path.extension() == ".cbvt" ? FeatureFormat::text : FeatureFormat::binary;
}

std::string
encode_features(const FeatureSet& set, FeatureFormat format) {
    check_ids_writable(set);
    return format == FeatureFormat::binary ? encode_binary(set) : encode_text(set);
}

FeatureSet
decode_features(std::string_view bytes, FeatureFormat format) {
    return format == FeatureFormat::binary ? decode_binary(bytes) : decode_text(bytes);
}

FeatureSet
load_features(const std::filesystem::path& path, FeatureFormat format) {
    auto bytes = read_file(path);
    try {
        return decode_features(bytes, format);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.detail(), e.record(), e.offset());
    }
}

FeatureSet
load_features(const std::filesystem::path& path) {
    return load_features(path, feature_format_for(path));
}

void
save_features(const FeatureSet& set, const std::filesystem::path& path, FeatureFormat format) {
    write_file(path, encode_features(set, format));
}

void
save_features(const FeatureSet& set, const std::filesystem::path& path) {
    save_features(set, path, feature_format_for(path));
}

}  // namespace cbvrp
