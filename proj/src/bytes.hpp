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

// Little-endian byte codecs shared by the binary file formats.
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "cbvrp/error.hpp"

namespace cbvrp::detail {

class ByteWriter {
 public:
    void
    bytes(std::string_view s) {
        buf_.append(s);
    }

    void
    u8(std::uint8_t v) {
        buf_.push_back(static_cast<char>(v));
    }

    void
    u16(std::uint16_t v) {
        put(v, 2);
    }

    void
    u32(std::uint32_t v) {
        put(v, 4);
    }

    void
    u64(std::uint64_t v) {
        put(v, 8);
    }

    void
    f32(float v) {
        put(std::bit_cast<std::uint32_t>(v), 4);
    }

    std::string
    take() {
        return std::move(buf_);
    }

 private:
    void
    put(std::uint64_t v, int width) {
        for (int i = 0; i < width; ++i) {
            buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
        }
    }

    std::string buf_;
};

/// Bounds-checked reader. Every failed read throws FormatError carrying the
/// caller-maintained record index and the current offset.
class ByteReader {
 public:
    explicit ByteReader(std::string_view data) : data_(data) {
    }

    std::size_t record = 0;

    std::size_t
    offset() const noexcept {
        return pos_;
    }

    std::size_t
    remaining() const noexcept {
        return data_.size() - pos_;
    }

    [[noreturn]] void
    fail(const std::string& what) const {
        throw FormatError(what, record, pos_);
    }

    void
    need(std::size_t n, const char* what) const {
        if (remaining() < n) {
            fail(std::string("truncated ") + what);
        }
    }

    std::string_view
    bytes(std::size_t n, const char* what) {
        need(n, what);
        auto out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    std::uint8_t
    u8(const char* what) {
        return static_cast<std::uint8_t>(get(1, what));
    }

    std::uint16_t
    u16(const char* what) {
        return static_cast<std::uint16_t>(get(2, what));
    }

    std::uint32_t
    u32(const char* what) {
        return static_cast<std::uint32_t>(get(4, what));
    }

    std::uint64_t
    u64(const char* what) {
        return get(8, what);
    }

    float
    f32(const char* what) {
        return std::bit_cast<float>(static_cast<std::uint32_t>(get(4, what)));
    }

 private:
    std::uint64_t
    get(int width, const char* what) {
        need(static_cast<std::size_t>(width), what);
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        }
        pos_ += static_cast<std::size_t>(width);
        return v;
    }

    std::string_view data_;
    std::size_t pos_ = 0;
};

}  // namespace cbvrp::detail
