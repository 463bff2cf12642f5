// Copyright 2026 The wg-iot Authors
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

#ifndef WGIOT_BYTES_HPP_
#define WGIOT_BYTES_HPP_

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wgiot/error.hpp"

namespace wgiot {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;
using u128 = unsigned __int128;

std::string to_hex(ByteSpan bytes);

// Accepts an even number of hex digits, either case. Throws kBadHex.
Bytes from_hex(std::string_view hex);

// Big-endian (network order) helpers. All packed fields are MSB-first.
void append_u64(Bytes& out, std::uint64_t value);
std::uint64_t load_u64(ByteSpan in);
void append_bytes(Bytes& out, ByteSpan bytes);

std::string u128_to_decimal(u128 value);
std::optional<u128> u128_from_decimal(std::string_view text);

// Fixed-width opaque byte string. `Tag` makes each protocol quantity its own
// type so an Aac can never be passed where an Mpc is expected.
template <typename Tag, std::size_t N>
class FixedBytes {
 public:
  static constexpr std::size_t kSize = N;
  static constexpr std::size_t kBits = N * 8;

  constexpr FixedBytes() = default;
  constexpr explicit FixedBytes(const std::array<std::uint8_t, N>& bytes)
      : bytes_(bytes) {}

  // Throws kBadLength unless `bytes` is exactly N long.
  static FixedBytes from_span(ByteSpan bytes) {
    if (bytes.size() != N) {
      throw Error(Errc::kBadLength, "expected " + std::to_string(N) +
                                        " bytes, got " +
                                        std::to_string(bytes.size()));
    }
    FixedBytes out;
    std::copy(bytes.begin(), bytes.end(), out.bytes_.begin());
    return out;
  }
  static FixedBytes from_hex(std::string_view hex) {
    return from_span(::wgiot::from_hex(hex));
  }

  const std::array<std::uint8_t, N>& bytes() const { return bytes_; }
  std::array<std::uint8_t, N>& mutable_bytes() { return bytes_; }
  ByteSpan span() const { return ByteSpan(bytes_); }
  std::string hex() const { return to_hex(span()); }

  friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;

 private:
  std::array<std::uint8_t, N> bytes_{};
};

}  // namespace wgiot

#endif  // WGIOT_BYTES_HPP_
