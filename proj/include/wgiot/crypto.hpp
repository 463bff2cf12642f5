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

// Key material and the keyed derivations shared by the ICD, access point
// and WBRAC. Every function here is pure.
//
// PRF message layouts (all integers big-endian):
//
//   authenticate_signature   key = SC_auth-K     tag 0x01  sd1|sd2|esn|icd_in
//   sd_generation            key = SC_auth-K     tag 0x02  aac|esn
//   authorization_signature  key = sd1|sd2       tag 0x03  challenge|esn|icd_in
//   derive_session_key       key = sd2           tag 0x04  (empty)
//
// Outputs are truncated to their most significant bits.

#ifndef WGIOT_CRYPTO_HPP_
#define WGIOT_CRYPTO_HPP_

#include <array>
#include <cstdint>
#include <string>

#include "wgiot/bytes.hpp"
#include "wgiot/prf.hpp"
#include "wgiot/rng.hpp"

namespace wgiot {

enum class Esn : std::uint64_t {};
enum class IcdIn : std::uint64_t {};
enum class WbracId : std::uint64_t {};

template <typename E>
constexpr std::uint64_t raw(E value) {
  return static_cast<std::uint64_t>(value);
}

using WgieKey = FixedBytes<struct WgieKeyTag, 32>;
using ScAuthKey = FixedBytes<struct ScAuthKeyTag, 16>;
using Aac = FixedBytes<struct AacTag, 16>;
using Mpc = FixedBytes<struct MpcTag, 16>;
using ToMap = FixedBytes<struct ToMapTag, 32>;
using Wmap = FixedBytes<struct WmapTag, 8>;
using AuthSignMap = FixedBytes<struct AuthSignMapTag, 16>;
using SessionKey = FixedBytes<struct SessionKeyTag, 16>;
using UpdateRand = FixedBytes<struct UpdateRandTag, 16>;

using PackedGuid = std::array<std::uint8_t, 48>;
using UniqueChallenge = std::array<std::uint8_t, 10>;

// Per-subscriber root material, fixed at provisioning.
struct WgieRecord {
  WgieKey key;
  Esn esn{};
  IcdIn icd_in{};

  friend bool operator==(const WgieRecord&, const WgieRecord&) = default;
};

// IoT_SD: sd1 authenticates, sd2 keys confidentiality.
struct SdPair {
  std::uint64_t sd1 = 0;
  std::uint64_t sd2 = 0;

  std::array<std::uint8_t, 16> bytes() const;
  static SdPair from_bytes(ByteSpan sixteen);

  friend auto operator<=>(const SdPair&, const SdPair&) = default;
};

// 128-bit update counter. Never decreases; incrementing past 2^128 - 1
// throws kRmcOverflow rather than wrapping.
class Rmc {
 public:
  constexpr Rmc() = default;
  constexpr explicit Rmc(u128 value) : value_(value) {}

  u128 value() const { return value_; }
  Rmc next() const;
  std::array<std::uint8_t, 16> bytes() const;
  static Rmc from_bytes(ByteSpan sixteen);
  std::string decimal() const { return u128_to_decimal(value_); }

  friend auto operator<=>(const Rmc&, const Rmc&) = default;

 private:
  u128 value_ = 0;
};

struct Guid {
  Aac aac;
  Mpc mpc;
  Rmc rmc;

  friend bool operator==(const Guid&, const Guid&) = default;
};

Aac authenticate_signature(const SdPair& sd, Esn esn, IcdIn icd_in,
                           const ScAuthKey& k,
                           const PrfBackend& prf = reference_prf());

SdPair sd_generation(const Aac& aac, Esn esn, const ScAuthKey& k,
                     const PrfBackend& prf = reference_prf());

// `challenge` must be a packed ToMap (32 bytes) or a packed unique
// challenge (10 bytes); anything else throws kChallengeLength.
AuthSignMap authorization_signature(const SdPair& sd, ByteSpan challenge,
                                    Esn esn, IcdIn icd_in,
                                    const PrfBackend& prf = reference_prf());

SessionKey derive_session_key(const SdPair& sd,
                              const PrfBackend& prf = reference_prf());

PackedGuid compose_guid(const Aac& aac, const Mpc& mpc, const Rmc& rmc);
Guid decompose_guid(ByteSpan packed);  // throws kBadLength unless 48 bytes

// wmap (8 bytes) followed by the low 16 bits of wbrac_id.
UniqueChallenge compose_unique_challenge(const Wmap& wmap, WbracId wbrac_id);

// The update-value chain both the ICD and the WBRAC run on the WBRAC's
// random value: the rand is laid out as an SdPair, signed into an AAC,
// and that AAC seeds sd_generation.
SdPair sd_from_rand(const UpdateRand& rand);
SdPair derive_update_sd(const UpdateRand& rand, Esn esn, IcdIn icd_in,
                        const ScAuthKey& k,
                        const PrfBackend& prf = reference_prf());

// Demonstration payload scrambler: XOR with a PRF keystream keyed by the
// session key. Applying it twice with the same nonce is the identity.
Bytes scramble(const SessionKey& key, std::uint64_t nonce, ByteSpan payload,
               const PrfBackend& prf = reference_prf());

ToMap gen_to_map(Rng& rng);            // 4 draws
Wmap gen_wmap(Rng& rng);               // 1 draw
UpdateRand gen_update_rand(Rng& rng);  // 2 draws
Mpc gen_mpc(Rng& rng);                 // 2 draws
SdPair gen_sd(Rng& rng);               // 2 draws, sd1 first

}  // namespace wgiot

#endif  // WGIOT_CRYPTO_HPP_
