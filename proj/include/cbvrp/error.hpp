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
#include <stdexcept>
#include <string>

namespace cbvrp {

/// Base class for every error raised by the library. The CLI maps these to
/// exit code 1.
class Error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Raised when an input violates a shape contract (vector dims, model dims,
/// registries).
class DimensionError : public Error {
 public:
    using Error::Error;
};

/// Malformed file content. Carries the 1-based record index (0 for the
/// header) and the byte offset at which the problem was detected.
namespace detail {

// Messages quote bytes from damaged input; control bytes (a NUL above all)
// would cut what() short, so they are shown as \xNN.
inline std::string
printable(const std::string& s) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        const auto c = static_cast<unsigned char>(ch);
        if (c < 0x20 || c == 0x7f) {
            out += "\\x";
            out += kHex[c >> 4];
            out += kHex[c & 0xf];
        } else {
            out += ch;
        }
    }
    return out;
}

}  // namespace detail

class FormatError : public Error {
 public:
    FormatError(const std::string& what, std::size_t record, std::uint64_t offset)
        : Error(detail::printable(what) + " at record " + std::to_string(record) +
                " (byte offset " + std::to_string(offset) + ")"),
          detail_(detail::printable(what)),
          record_(record),
          offset_(offset) {
    }

    /// The message without the position suffix.
    const std::string&
    detail() const noexcept {
        return detail_;
    }

    std::size_t
    record() const noexcept {
        return record_;
    }

    std::uint64_t
    offset() const noexcept {
        return offset_;
    }

 private:
    std::string detail_;
    std::size_t record_;
    std::uint64_t offset_;
};

}  // namespace cbvrp
