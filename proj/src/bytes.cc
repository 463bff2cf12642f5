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

#include "wgiot/bytes.hpp"

#include <algorithm>

namespace wgiot {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kChallengeLength: return "ChallengeLength";
    case Errc::kBadLength: return "BadLength";
    case Errc::kBadHex: return "BadHex";
    case Errc::kUnknownTag: return "UnknownTag";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kTruncated: return "Truncated";
    case Errc::kNotIdle: return "NotIdle";
    case Errc::kUnknownIcd: return "UnknownIcd";
    case Errc::kDuplicateIcd: return "DuplicateIcd";
    case Errc::kTooEarly: return "TooEarly";
    case Errc::kUpdateInProgress: return "UpdateInProgress";
    case Errc::kNoPendingUpdate: return "NoPendingUpdate";
    case Errc::kRmcOverflow: return "RmcOverflow";
    case Errc::kIoFailure: return "IoFailure";
    case Errc::kParseError: return "ParseError";
    case Errc::kScenarioError: return "ScenarioError";
    case Errc::kNoEvents: return "NoEvents";
    case Errc::kUnknownBackend: return "UnknownBackend";
  }
  return "Unknown";
}

std::string to_hex(ByteSpan bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw Error(Errc::kBadHex, "odd number of hex digits");
  }
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_value(hex[i]);
    int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(Errc::kBadHex, "invalid hex digit");
    }
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

void append_u64(Bytes& out, std::uint64_t value) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(value >> shift));
  }
}

std::uint64_t load_u64(ByteSpan in) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    value = (value << 8) | in[i];
  }
  return value;
}

void append_bytes(Bytes& out, ByteSpan bytes) {
  out.insert(out.end(), bytes.begin(), bytes.end());
}

std::string u128_to_decimal(u128 value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

std::optional<u128> u128_from_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  constexpr u128 kMax = ~u128{0};
  u128 value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    auto digit = static_cast<unsigned>(c - '0');
    if (value > (kMax - digit) / 10) return std::nullopt;
    value = value * 10 + digit;
  }
  return value;
}

}  // namespace wgiot
