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

#include <gtest/gtest.h>

#include "wgiot/error.hpp"
#include "wgiot/rng.hpp"
#include "wgiot/wire.hpp"

namespace wgiot {
namespace {

Errc decode_error(const Bytes& frame) {
  try {
    decode(frame);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "decoded " << to_hex(frame);
  return Errc::kIoFailure;
}

TEST(Wire, PayloadSizeTable) {
  const std::size_t sizes[] = {8, 16, 0, 64, 0, 24, 16, 32, 0, 40, 16, 16, 0, 0, 8, 16, 1};
  for (std::uint8_t b = kFirstTag; b <= kLastTag; ++b) {
    auto tag = tag_from_byte(b);
    ASSERT_TRUE(tag);
    EXPECT_EQ(payload_size(*tag), sizes[b - 1]) << int(b);
    EXPECT_EQ(tag_from_name(tag_name(*tag)), tag);
  }
  EXPECT_FALSE(tag_from_byte(0x00));
  EXPECT_FALSE(tag_from_byte(0x12));
  EXPECT_FALSE(tag_from_name("Bogus"));
}

TEST(Wire, AuthAcceptIsThreeBytes) {
  EXPECT_EQ(to_hex(encode(AuthAccept{})), "050000");
}

TEST(Wire, AuthRequestLayout) {
  AuthRequest req;
  req.icd_in = IcdIn{0x0102030405060708ull};
  req.esn = Esn{0x1112131415161718ull};
  for (std::size_t i = 0; i < req.guid.size(); ++i) req.guid[i] = static_cast<std::uint8_t>(i);
  Bytes frame = encode(req);
  ASSERT_EQ(frame.size(), 67u);
  EXPECT_EQ(to_hex(ByteSpan(frame).subspan(0, 19)),
            "04004001020304050607081112131415161718");
  EXPECT_EQ(frame[19], 0);
  EXPECT_EQ(frame[66], 47);
  EXPECT_EQ(std::get<AuthRequest>(decode(frame)), req);
}

TEST(Wire, AccessDeniedCarriesReason) {
  EXPECT_EQ(to_hex(encode(AccessDenied{DenyReason::kUnknownIcd})), "11000103");
  // Unknown reason bytes still decode.
  auto msg = decode(from_hex("110001ff"));
  EXPECT_EQ(static_cast<int>(std::get<AccessDenied>(msg).reason), 0xff);
}

TEST(Wire, DecodeErrorOrder) {
  EXPECT_EQ(decode_error({}), Errc::kTruncated);
  EXPECT_EQ(decode_error(from_hex("0500")), Errc::kTruncated);
  EXPECT_EQ(decode_error(from_hex("000000")), Errc::kUnknownTag);
  EXPECT_EQ(decode_error(from_hex("ff0000")), Errc::kUnknownTag);
  EXPECT_EQ(decode_error(from_hex("050001")), Errc::kLengthMismatch);
  EXPECT_EQ(decode_error(from_hex("0f0007aabbccddeeff00")), Errc::kLengthMismatch);
  EXPECT_EQ(decode_error(from_hex("0f0008aabb")), Errc::kTruncated);
  EXPECT_EQ(decode_error(from_hex("05000000")), Errc::kLengthMismatch);
  EXPECT_EQ(decode_error(from_hex("0f0008000000000000000000")), Errc::kLengthMismatch);
}

WireMessage random_message(Rng& rng) {
  auto fill = [&](auto& fixed) {
    for (auto& b : fixed.mutable_bytes()) b = static_cast<std::uint8_t>(rng.next());
  };
  switch (rng.next() % 17) {
    case 0: return SecureActivation{IcdIn{rng.next()}};
    case 1: { AccessParameterMessage m; fill(m.mpc); return m; }
    case 2: return ParameterUpdateOrder{};
    case 3: {
      AuthRequest m{IcdIn{rng.next()}, Esn{rng.next()}, {}};
      for (auto& b : m.guid) b = static_cast<std::uint8_t>(rng.next());
      return m;
    }
    case 4: return AuthAccept{};
    case 5: { UpdateMessage m{IcdIn{rng.next()}, {}}; fill(m.rand); return m; }
    case 6: { UpdateOrder m; fill(m.rand); return m; }
    case 7: { MobileAccessChallengeOrder m; fill(m.to_map); return m; }
    case 8: return ChallengeAck{};
    case 9: { MapChallengeForward m{IcdIn{rng.next()}, {}}; fill(m.to_map); return m; }
    case 10: { MapChallengeResponse m; fill(m.sig); return m; }
    case 11: { MapChallengeResponseOrder m; fill(m.sig); return m; }
    case 12: return UpdateRejection{};
    case 13: return UpdateConfirmation{};
    case 14: { AuthenticationChallenge m; fill(m.wmap); return m; }
    case 15: { AuthChallengeAnswer m; fill(m.sig); return m; }
    default: return AccessDenied{static_cast<DenyReason>(rng.next() & 0xff)};
  }
}

TEST(Wire, RoundTripProperty) {
  Rng rng(2024);
  for (int i = 0; i < 5000; ++i) {
    WireMessage msg = random_message(rng);
    Bytes frame = encode(msg);
    ASSERT_EQ(frame.size(), kHeaderSize + payload_size(tag_of(msg)));
    ASSERT_EQ(frame[0], static_cast<std::uint8_t>(tag_of(msg)));
    ASSERT_EQ(decode(frame), msg);
    // Any strict prefix or one-byte extension is rejected.
    Bytes longer = frame;
    longer.push_back(0);
    EXPECT_THROW(decode(longer), Error);
    frame.pop_back();
    EXPECT_THROW(decode(frame), Error);
  }
}

TEST(Wire, VariantIndexMatchesTag) {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    WireMessage msg = random_message(rng);
    EXPECT_EQ(msg.index() + 1, static_cast<std::size_t>(tag_of(msg)));
  }
}

}  // namespace
}  // namespace wgiot
