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

#ifndef WGIOT_PRF_HPP_
#define WGIOT_PRF_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wgiot/bytes.hpp"

namespace wgiot {

using PrfOutput = std::array<std::uint8_t, 32>;

// One byte prepended to every PRF message. Each derivation owns one tag.
enum class DomainTag : std::uint8_t {
  kAuthenticateSignature = 0x01,
  kSdGeneration = 0x02,
  kAuthorizationSignature = 0x03,
  kSessionKey = 0x04,
  kScramble = 0x05,
};

// Keyed pseudorandom function with 256-bit output. Implementations must be
// deterministic and stateless; name() is written into traces and vector
// files so runs can be attributed to a backend.
class PrfBackend {
 public:
  virtual ~PrfBackend() = default;

  virtual std::string_view name() const = 0;
  virtual PrfOutput evaluate(ByteSpan key, DomainTag tag,
                             ByteSpan message) const = 0;
};

// HMAC-SHA-256(key, tag || message).
class HmacSha256Prf final : public PrfBackend {
 public:
  static constexpr std::string_view kName = "hmac-sha256";

  std::string_view name() const override { return kName; }
  PrfOutput evaluate(ByteSpan key, DomainTag tag,
                     ByteSpan message) const override;
};

// Keeps only the `bits` most significant bits of the reference backend and
// zeroes the rest. Test-only: used to measure forgery rates at a width small
// enough to observe.
class TruncatedPrf final : public PrfBackend {
 public:
  static constexpr std::string_view kName16 = "hmac-sha256-trunc16";

  explicit TruncatedPrf(unsigned bits);

  std::string_view name() const override { return name_; }
  PrfOutput evaluate(ByteSpan key, DomainTag tag,
                     ByteSpan message) const override;
  unsigned bits() const { return bits_; }

 private:
  unsigned bits_;
  std::string name_;
  HmacSha256Prf inner_;
};

const PrfBackend& reference_prf();

// Known names: "hmac-sha256", "hmac-sha256-trunc16". Throws kUnknownBackend.
std::unique_ptr<PrfBackend> make_backend(std::string_view name);
std::vector<std::string> backend_names();

}  // namespace wgiot

#endif  // WGIOT_PRF_HPP_
