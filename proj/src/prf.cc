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

#include "wgiot/prf.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <string>

namespace wgiot {

PrfOutput HmacSha256Prf::evaluate(ByteSpan key, DomainTag tag,
                                  ByteSpan message) const {
  Bytes input;
  input.reserve(message.size() + 1);
  input.push_back(static_cast<std::uint8_t>(tag));
  append_bytes(input, message);

  PrfOutput out{};
  unsigned int out_len = 0;
  // HMAC() accepts a null key pointer only together with zero length.
  static constexpr std::uint8_t kEmpty = 0;
  const std::uint8_t* key_ptr = key.empty() ? &kEmpty : key.data();
  if (HMAC(EVP_sha256(), key_ptr, static_cast<int>(key.size()), input.data(),
           input.size(), out.data(), &out_len) == nullptr ||
      out_len != out.size()) {
    throw std::runtime_error("HMAC-SHA-256 evaluation failed");
  }
  return out;
}

TruncatedPrf::TruncatedPrf(unsigned bits)
    : bits_(bits), name_("hmac-sha256-trunc" + std::to_string(bits)) {
  if (bits == 0 || bits > 256) {
    throw Error(Errc::kUnknownBackend, "truncation width out of range");
  }
}

PrfOutput TruncatedPrf::evaluate(ByteSpan key, DomainTag tag,
                                 ByteSpan message) const {
  PrfOutput out = inner_.evaluate(key, tag, message);
  for (unsigned bit = bits_; bit < 256; ++bit) {
    out[bit / 8] &= static_cast<std::uint8_t>(~(0x80u >> (bit % 8)));
  }
  return out;
}

const PrfBackend& reference_prf() {
  static const HmacSha256Prf kReference;
  return kReference;
}

std::unique_ptr<PrfBackend> make_backend(std::string_view name) {
  if (name == HmacSha256Prf::kName) return std::make_unique<HmacSha256Prf>();
  if (name == TruncatedPrf::kName16) return std::make_unique<TruncatedPrf>(16);
  throw Error(Errc::kUnknownBackend,
              "unknown PRF backend '" + std::string(name) + "'");
}

std::vector<std::string> backend_names() {
  return {std::string(HmacSha256Prf::kName),
          std::string(TruncatedPrf::kName16)};
}

}  // namespace wgiot
