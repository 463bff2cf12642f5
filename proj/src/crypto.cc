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

#include "wgiot/crypto.hpp"

#include <algorithm>

namespace wgiot {

namespace {

template <typename Out>
Out first_bytes(const PrfOutput& prf_out) {
  std::array<std::uint8_t, Out::kSize> bytes{};
  std::copy_n(prf_out.begin(), Out::kSize, bytes.begin());
  return Out(bytes);
}

}  // namespace

std::array<std::uint8_t, 16> SdPair::bytes() const {
  Bytes buf;
  append_u64(buf, sd1);
  append_u64(buf, sd2);
  std::array<std::uint8_t, 16> out{};
  std::copy(buf.begin(), buf.end(), out.begin());
  return out;
}

SdPair SdPair::from_bytes(ByteSpan sixteen) {
  if (sixteen.size() != 16) {
    throw Error(Errc::kBadLength, "IoT_SD must be 16 bytes");
  }
  return SdPair{load_u64(sixteen.first(8)), load_u64(sixteen.subspan(8))};
}

Rmc Rmc::next() const {
  if (value_ == ~u128{0}) {
    throw Error(Errc::kRmcOverflow, "RMC counter would wrap");
  }
  return Rmc(value_ + 1);
}

std::array<std::uint8_t, 16> Rmc::bytes() const {
  std::array<std::uint8_t, 16> out{};
  for (std::size_t i = 0; i < 16; ++i) {
    out[i] = static_cast<std::uint8_t>(value_ >> (8 * (15 - i)));
  }
  return out;
}

Rmc Rmc::from_bytes(ByteSpan sixteen) {
  if (sixteen.size() != 16) {
    throw Error(Errc::kBadLength, "RMC must be 16 bytes");
  }
  u128 value = 0;
  for (std::uint8_t b : sixteen) value = (value << 8) | b;
  return Rmc(value);
}

Aac authenticate_signature(const SdPair& sd, Esn esn, IcdIn icd_in,
                           const ScAuthKey& k, const PrfBackend& prf) {
  Bytes msg;
  msg.reserve(32);
  append_u64(msg, sd.sd1);
  append_u64(msg, sd.sd2);
  append_u64(msg, raw(esn));
  append_u64(msg, raw(icd_in));
  return first_bytes<Aac>(
      prf.evaluate(k.span(), DomainTag::kAuthenticateSignature, msg));
}

SdPair sd_generation(const Aac& aac, Esn esn, const ScAuthKey& k,
                     const PrfBackend& prf) {
  Bytes msg;
  msg.reserve(24);
  append_bytes(msg, aac.span());
  append_u64(msg, raw(esn));
  PrfOutput out = prf.evaluate(k.span(), DomainTag::kSdGeneration, msg);
  return SdPair::from_bytes(ByteSpan(out).first(16));
}

AuthSignMap authorization_signature(const SdPair& sd, ByteSpan challenge,
                                    Esn esn, IcdIn icd_in,
                                    const PrfBackend& prf) {
  if (challenge.size() != ToMap::kSize &&
      challenge.size() != std::tuple_size_v<UniqueChallenge>) {
    throw Error(Errc::kChallengeLength,
                "challenge must be 32 or 10 bytes, got " +
                    std::to_string(challenge.size()));
  }
  Bytes msg;
  msg.reserve(challenge.size() + 16);
  append_bytes(msg, challenge);
  append_u64(msg, raw(esn));
  append_u64(msg, raw(icd_in));
  auto key = sd.bytes();
  return first_bytes<AuthSignMap>(
      prf.evaluate(key, DomainTag::kAuthorizationSignature, msg));
}

SessionKey derive_session_key(const SdPair& sd, const PrfBackend& prf) {
  Bytes key;
  append_u64(key, sd.sd2);
  return first_bytes<SessionKey>(
      prf.evaluate(key, DomainTag::kSessionKey, ByteSpan()));
}

PackedGuid compose_guid(const Aac& aac, const Mpc& mpc, const Rmc& rmc) {
  PackedGuid out{};
  auto it = std::copy(aac.bytes().begin(), aac.bytes().end(), out.begin());
  it = std::copy(mpc.bytes().begin(), mpc.bytes().end(), it);
  auto rmc_bytes = rmc.bytes();
  std::copy(rmc_bytes.begin(), rmc_bytes.end(), it);
  return out;
}

Guid decompose_guid(ByteSpan packed) {
  if (packed.size() != 48) {
    throw Error(Errc::kBadLength, "packed GUID must be 48 bytes, got " +
                                      std::to_string(packed.size()));
  }
  return Guid{Aac::from_span(packed.first(16)),
              Mpc::from_span(packed.subspan(16, 16)),
              Rmc::from_bytes(packed.subspan(32, 16))};
}

UniqueChallenge compose_unique_challenge(const Wmap& wmap, WbracId wbrac_id) {
  UniqueChallenge out{};
  std::copy(wmap.bytes().begin(), wmap.bytes().end(), out.begin());
  out[8] = static_cast<std::uint8_t>(raw(wbrac_id) >> 8);
  out[9] = static_cast<std::uint8_t>(raw(wbrac_id));
  return out;
}

SdPair sd_from_rand(const UpdateRand& rand) {
  return SdPair::from_bytes(rand.span());
}

SdPair derive_update_sd(const UpdateRand& rand, Esn esn, IcdIn icd_in,
                        const ScAuthKey& k, const PrfBackend& prf) {
  Aac from_rand = authenticate_signature(sd_from_rand(rand), esn, icd_in, k, prf);
  return sd_generation(from_rand, esn, k, prf);
}

Bytes scramble(const SessionKey& key, std::uint64_t nonce, ByteSpan payload,
               const PrfBackend& prf) {
  Bytes out(payload.begin(), payload.end());
  std::uint64_t block = 0;
  for (std::size_t offset = 0; offset < out.size(); offset += 32, ++block) {
    Bytes msg;
    append_u64(msg, nonce);
    append_u64(msg, block);
    PrfOutput stream = prf.evaluate(key.span(), DomainTag::kScramble, msg);
    for (std::size_t i = 0; i < 32 && offset + i < out.size(); ++i) {
      out[offset + i] ^= stream[i];
    }
  }
  return out;
}

ToMap gen_to_map(Rng& rng) { return ToMap(rng.blob<32>()); }
Wmap gen_wmap(Rng& rng) { return Wmap(rng.blob<8>()); }
UpdateRand gen_update_rand(Rng& rng) { return UpdateRand(rng.blob<16>()); }
Mpc gen_mpc(Rng& rng) { return Mpc(rng.blob<16>()); }

SdPair gen_sd(Rng& rng) {
  auto bytes = rng.blob<16>();
  return SdPair::from_bytes(bytes);
}

}  // namespace wgiot
