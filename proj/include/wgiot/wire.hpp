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

// Protocol frames. Every frame is
//
//   tag (1 byte) | payload length (2 bytes, big-endian) | payload
//
// with payload fields big-endian in declaration order. docs/frames.md
// carries the same table.

#ifndef WGIOT_WIRE_HPP_
#define WGIOT_WIRE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

#include "wgiot/bytes.hpp"
#include "wgiot/crypto.hpp"

namespace wgiot {

enum class Tag : std::uint8_t {
  kSecureActivation = 0x01,
  kAccessParameterMessage = 0x02,
  kParameterUpdateOrder = 0x03,
  kAuthRequest = 0x04,
  kAuthAccept = 0x05,
  kUpdateMessage = 0x06,
  kUpdateOrder = 0x07,
  kMobileAccessChallengeOrder = 0x08,
  kChallengeAck = 0x09,
  kMapChallengeForward = 0x0A,
  kMapChallengeResponse = 0x0B,
  kMapChallengeResponseOrder = 0x0C,
  kUpdateRejection = 0x0D,
  kUpdateConfirmation = 0x0E,
  kAuthenticationChallenge = 0x0F,
  kAuthChallengeAnswer = 0x10,
  kAccessDenied = 0x11,
};

inline constexpr std::uint8_t kFirstTag = 0x01;
inline constexpr std::uint8_t kLastTag = 0x11;
inline constexpr std::size_t kHeaderSize = 3;

// AccessDenied reason byte. Decoding accepts any value.
enum class DenyReason : std::uint8_t {
  kChallengeFailure = 0x01,
  kPolicy = 0x02,
  kUnknownIcd = 0x03,
};

struct SecureActivation {
  IcdIn icd_in{};
  friend bool operator==(const SecureActivation&, const SecureActivation&) = default;
};
struct AccessParameterMessage {
  Mpc mpc;
  friend bool operator==(const AccessParameterMessage&, const AccessParameterMessage&) = default;
};
struct ParameterUpdateOrder {
  friend bool operator==(const ParameterUpdateOrder&, const ParameterUpdateOrder&) = default;
};
struct AuthRequest {
  IcdIn icd_in{};
  Esn esn{};
  PackedGuid guid{};
  friend bool operator==(const AuthRequest&, const AuthRequest&) = default;
};
struct AuthAccept {
  friend bool operator==(const AuthAccept&, const AuthAccept&) = default;
};
struct UpdateMessage {
  IcdIn icd_in{};
  UpdateRand rand;
  friend bool operator==(const UpdateMessage&, const UpdateMessage&) = default;
};
struct UpdateOrder {
  UpdateRand rand;
  friend bool operator==(const UpdateOrder&, const UpdateOrder&) = default;
};
struct MobileAccessChallengeOrder {
  ToMap to_map;
  friend bool operator==(const MobileAccessChallengeOrder&, const MobileAccessChallengeOrder&) = default;
};
struct ChallengeAck {
  friend bool operator==(const ChallengeAck&, const ChallengeAck&) = default;
};
struct MapChallengeForward {
  IcdIn icd_in{};
  ToMap to_map;
  friend bool operator==(const MapChallengeForward&, const MapChallengeForward&) = default;
};
struct MapChallengeResponse {
  AuthSignMap sig;
  friend bool operator==(const MapChallengeResponse&, const MapChallengeResponse&) = default;
};
struct MapChallengeResponseOrder {
  AuthSignMap sig;
  friend bool operator==(const MapChallengeResponseOrder&, const MapChallengeResponseOrder&) = default;
};
struct UpdateRejection {
  friend bool operator==(const UpdateRejection&, const UpdateRejection&) = default;
};
struct UpdateConfirmation {
  friend bool operator==(const UpdateConfirmation&, const UpdateConfirmation&) = default;
};
struct AuthenticationChallenge {
  Wmap wmap;
  friend bool operator==(const AuthenticationChallenge&, const AuthenticationChallenge&) = default;
};
struct AuthChallengeAnswer {
  AuthSignMap sig;
  friend bool operator==(const AuthChallengeAnswer&, const AuthChallengeAnswer&) = default;
};
struct AccessDenied {
  DenyReason reason = DenyReason::kChallengeFailure;
  friend bool operator==(const AccessDenied&, const AccessDenied&) = default;
};

// Alternative index + 1 == tag value.
using WireMessage =
    std::variant<SecureActivation, AccessParameterMessage, ParameterUpdateOrder,
                 AuthRequest, AuthAccept, UpdateMessage, UpdateOrder,
                 MobileAccessChallengeOrder, ChallengeAck, MapChallengeForward,
                 MapChallengeResponse, MapChallengeResponseOrder,
                 UpdateRejection, UpdateConfirmation, AuthenticationChallenge,
                 AuthChallengeAnswer, AccessDenied>;

Tag tag_of(const WireMessage& msg);
std::string_view tag_name(Tag tag);
std::optional<Tag> tag_from_name(std::string_view name);
std::optional<Tag> tag_from_byte(std::uint8_t byte);

// Fixed payload size for each tag.
std::size_t payload_size(Tag tag);

Bytes encode(const WireMessage& msg);

// Strict inverse of encode. Throws kTruncated (fewer than 3 header bytes, or
// fewer payload bytes than declared), kUnknownTag, or kLengthMismatch
// (declared length differs from the tag's payload size, or trailing bytes).
WireMessage decode(ByteSpan frame);

}  // namespace wgiot

#endif  // WGIOT_WIRE_HPP_
