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

#include "wgiot/wire.hpp"

#include <array>
#include <string>

namespace wgiot {

namespace {

struct TagInfo {
  Tag tag;
  std::string_view name;
  std::size_t payload;
};

constexpr std::array<TagInfo, 17> kTags = {{
    {Tag::kSecureActivation, "SecureActivation", 8},
    {Tag::kAccessParameterMessage, "AccessParameterMessage", 16},
    {Tag::kParameterUpdateOrder, "ParameterUpdateOrder", 0},
    {Tag::kAuthRequest, "AuthRequest", 64},
    {Tag::kAuthAccept, "AuthAccept", 0},
    {Tag::kUpdateMessage, "UpdateMessage", 24},
    {Tag::kUpdateOrder, "UpdateOrder", 16},
    {Tag::kMobileAccessChallengeOrder, "MobileAccessChallengeOrder", 32},
    {Tag::kChallengeAck, "ChallengeAck", 0},
    {Tag::kMapChallengeForward, "MapChallengeForward", 40},
    {Tag::kMapChallengeResponse, "MapChallengeResponse", 16},
    {Tag::kMapChallengeResponseOrder, "MapChallengeResponseOrder", 16},
    {Tag::kUpdateRejection, "UpdateRejection", 0},
    {Tag::kUpdateConfirmation, "UpdateConfirmation", 0},
    {Tag::kAuthenticationChallenge, "AuthenticationChallenge", 8},
    {Tag::kAuthChallengeAnswer, "AuthChallengeAnswer", 16},
    {Tag::kAccessDenied, "AccessDenied", 1},
}};

const TagInfo& info(Tag tag) {
  return kTags[static_cast<std::size_t>(tag) - kFirstTag];
}

// Payload writers, one overload per frame.
void put(Bytes&, const ParameterUpdateOrder&) {}
void put(Bytes&, const AuthAccept&) {}
void put(Bytes&, const ChallengeAck&) {}
void put(Bytes&, const UpdateRejection&) {}
void put(Bytes&, const UpdateConfirmation&) {}
void put(Bytes& out, const SecureActivation& m) { append_u64(out, raw(m.icd_in)); }
void put(Bytes& out, const AccessParameterMessage& m) { append_bytes(out, m.mpc.span()); }
void put(Bytes& out, const AuthRequest& m) {
  append_u64(out, raw(m.icd_in));
  append_u64(out, raw(m.esn));
  append_bytes(out, m.guid);
}
void put(Bytes& out, const UpdateMessage& m) {
  append_u64(out, raw(m.icd_in));
  append_bytes(out, m.rand.span());
}
void put(Bytes& out, const UpdateOrder& m) { append_bytes(out, m.rand.span()); }
void put(Bytes& out, const MobileAccessChallengeOrder& m) { append_bytes(out, m.to_map.span()); }
void put(Bytes& out, const MapChallengeForward& m) {
  append_u64(out, raw(m.icd_in));
  append_bytes(out, m.to_map.span());
}
void put(Bytes& out, const MapChallengeResponse& m) { append_bytes(out, m.sig.span()); }
void put(Bytes& out, const MapChallengeResponseOrder& m) { append_bytes(out, m.sig.span()); }
void put(Bytes& out, const AuthenticationChallenge& m) { append_bytes(out, m.wmap.span()); }
void put(Bytes& out, const AuthChallengeAnswer& m) { append_bytes(out, m.sig.span()); }
void put(Bytes& out, const AccessDenied& m) { out.push_back(static_cast<std::uint8_t>(m.reason)); }

WireMessage parse_payload(Tag tag, ByteSpan p) {
  switch (tag) {
    case Tag::kSecureActivation:
      return SecureActivation{IcdIn{load_u64(p)}};
    case Tag::kAccessParameterMessage:
      return AccessParameterMessage{Mpc::from_span(p)};
    case Tag::kParameterUpdateOrder:
      return ParameterUpdateOrder{};
    case Tag::kAuthRequest: {
      AuthRequest m{IcdIn{load_u64(p.first(8))}, Esn{load_u64(p.subspan(8, 8))}, {}};
      std::copy(p.begin() + 16, p.end(), m.guid.begin());
      return m;
    }
    case Tag::kAuthAccept:
      return AuthAccept{};
    case Tag::kUpdateMessage:
      return UpdateMessage{IcdIn{load_u64(p.first(8))}, UpdateRand::from_span(p.subspan(8))};
    case Tag::kUpdateOrder:
      return UpdateOrder{UpdateRand::from_span(p)};
    case Tag::kMobileAccessChallengeOrder:
      return MobileAccessChallengeOrder{ToMap::from_span(p)};
    case Tag::kChallengeAck:
      return ChallengeAck{};
    case Tag::kMapChallengeForward:
      return MapChallengeForward{IcdIn{load_u64(p.first(8))}, ToMap::from_span(p.subspan(8))};
    case Tag::kMapChallengeResponse:
      return MapChallengeResponse{AuthSignMap::from_span(p)};
    case Tag::kMapChallengeResponseOrder:
      return MapChallengeResponseOrder{AuthSignMap::from_span(p)};
    case Tag::kUpdateRejection:
      return UpdateRejection{};
    case Tag::kUpdateConfirmation:
      return UpdateConfirmation{};
    case Tag::kAuthenticationChallenge:
      return AuthenticationChallenge{Wmap::from_span(p)};
    case Tag::kAuthChallengeAnswer:
      return AuthChallengeAnswer{AuthSignMap::from_span(p)};
    case Tag::kAccessDenied:
      return AccessDenied{static_cast<DenyReason>(p[0])};
  }
  throw Error(Errc::kUnknownTag, "unknown tag");
}

}  // namespace

Tag tag_of(const WireMessage& msg) {
  return static_cast<Tag>(msg.index() + kFirstTag);
}

std::string_view tag_name(Tag tag) { return info(tag).name; }

std::optional<Tag> tag_from_name(std::string_view name) {
  for (const auto& t : kTags) {
    if (t.name == name) return t.tag;
  }
  return std::nullopt;
}

std::optional<Tag> tag_from_byte(std::uint8_t byte) {
  if (byte < kFirstTag || byte > kLastTag) return std::nullopt;
  return static_cast<Tag>(byte);
}

std::size_t payload_size(Tag tag) { return info(tag).payload; }

Bytes encode(const WireMessage& msg) {
  Tag tag = tag_of(msg);
  std::size_t size = payload_size(tag);
  Bytes out;
  out.reserve(kHeaderSize + size);
  out.push_back(static_cast<std::uint8_t>(tag));
  out.push_back(static_cast<std::uint8_t>(size >> 8));
  out.push_back(static_cast<std::uint8_t>(size));
  std::visit([&out](const auto& m) { put(out, m); }, msg);
  return out;
}

WireMessage decode(ByteSpan frame) {
  if (frame.size() < kHeaderSize) {
    throw Error(Errc::kTruncated, "frame shorter than header");
  }
  auto tag = tag_from_byte(frame[0]);
  if (!tag) {
    throw Error(Errc::kUnknownTag, "unknown tag " + std::to_string(frame[0]));
  }
  std::size_t declared = (std::size_t{frame[1]} << 8) | frame[2];
  std::size_t expected = payload_size(*tag);
  if (declared != expected) {
    throw Error(Errc::kLengthMismatch,
                std::string(tag_name(*tag)) + " payload must be " +
                    std::to_string(expected) + " bytes, header says " +
                    std::to_string(declared));
  }
  std::size_t actual = frame.size() - kHeaderSize;
  if (actual < declared) {
    throw Error(Errc::kTruncated, "payload shorter than declared length");
  }
  if (actual > declared) {
    throw Error(Errc::kLengthMismatch, "trailing bytes after payload");
  }
  return parse_payload(*tag, frame.subspan(kHeaderSize));
}

}  // namespace wgiot
