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

#include "wgiot/vectors.hpp"

#include <sstream>

#include "text_util.hpp"
#include "wgiot/crypto.hpp"

namespace wgiot {

namespace {

PrfVector evaluate(const PrfBackend& prf, DomainTag tag, Bytes key,
                   Bytes message) {
  PrfOutput out = prf.evaluate(key, tag, message);
  return PrfVector{static_cast<std::uint8_t>(tag), std::move(key),
                   std::move(message), Bytes(out.begin(), out.end())};
}

Bytes zeros(std::size_t n) { return Bytes(n, 0); }

std::string hex_or_dash(const Bytes& b) { return b.empty() ? "-" : to_hex(b); }

Bytes parse_hex_field(std::string_view field, std::size_t line) {
  if (field == "-") return {};
  try {
    return from_hex(field);
  } catch (const Error&) {
    throw Error(Errc::kParseError,
                "line " + std::to_string(line) + ": bad hex field", line);
  }
}

template <std::size_t N>
Bytes to_bytes(const std::array<std::uint8_t, N>& a) {
  return Bytes(a.begin(), a.end());
}

}  // namespace

VectorFile generate_vectors(const PrfBackend& prf) {
  VectorFile file;
  file.backend = std::string(prf.name());

  // All-zero vectors for each derivation, in the operations' own layouts.
  file.prf.push_back(evaluate(prf, DomainTag::kAuthenticateSignature,
                              zeros(16), zeros(32)));
  Bytes flipped = zeros(32);
  flipped[0] = 0x80;  // msb of sd1
  file.prf.push_back(
      evaluate(prf, DomainTag::kAuthenticateSignature, zeros(16), flipped));
  file.prf.push_back(
      evaluate(prf, DomainTag::kSdGeneration, zeros(16), zeros(24)));
  Bytes aac_one = zeros(24);
  aac_one[15] = 0x01;
  file.prf.push_back(
      evaluate(prf, DomainTag::kSdGeneration, zeros(16), aac_one));
  file.prf.push_back(evaluate(prf, DomainTag::kAuthorizationSignature,
                              zeros(16), zeros(48)));
  file.prf.push_back(evaluate(prf, DomainTag::kAuthorizationSignature,
                              zeros(16), zeros(26)));
  file.prf.push_back(evaluate(prf, DomainTag::kSessionKey, zeros(8), {}));

  // Non-trivial material drawn from a fixed seed.
  Rng rng(7);
  for (int i = 0; i < 4; ++i) {
    Bytes key = to_bytes(rng.blob<16>());
    Bytes msg = to_bytes(rng.blob<32>());
    file.prf.push_back(evaluate(prf, DomainTag::kAuthenticateSignature, key,
                                msg));
    Bytes challenge = to_bytes(rng.blob<48>());
    file.prf.push_back(evaluate(prf, DomainTag::kAuthorizationSignature,
                                key, challenge));
  }

  Rng to_map_rng(42);
  file.seeds.push_back({"to_map", 42, to_bytes(gen_to_map(to_map_rng).bytes())});
  file.seeds.push_back(
      {"to_map_second", 42, to_bytes(gen_to_map(to_map_rng).bytes())});
  Rng wmap_rng(42);
  file.seeds.push_back({"wmap", 42, to_bytes(gen_wmap(wmap_rng).bytes())});
  Rng rand_rng(42);
  file.seeds.push_back(
      {"update_rand", 42, to_bytes(gen_update_rand(rand_rng).bytes())});
  return file;
}

std::string format_vectors(const VectorFile& file) {
  std::ostringstream out;
  out << "# wg-iot conformance vectors\n";
  out << "backend " << file.backend << "\n";
  for (const auto& v : file.prf) {
    std::uint8_t tag[1] = {v.tag};
    out << to_hex(tag) << ' ' << hex_or_dash(v.key) << ' '
        << hex_or_dash(v.message) << ' ' << to_hex(v.output) << '\n';
  }
  for (const auto& s : file.seeds) {
    Bytes seed;
    append_u64(seed, s.seed);
    out << "seed " << s.kind << ' ' << to_hex(seed) << ' ' << to_hex(s.output)
        << '\n';
  }
  return out.str();
}

VectorFile parse_vectors(std::string_view text) {
  VectorFile file;
  std::size_t line_no = 0;
  for (std::string_view raw_line : text::lines(text)) {
    ++line_no;
    std::string_view line = text::trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    auto f = text::fields(line);
    auto fail = [&](const std::string& why) {
      return Error(Errc::kParseError,
                   "line " + std::to_string(line_no) + ": " + why, line_no);
    };
    if (f[0] == "backend") {
      if (f.size() != 2) throw fail("expected 'backend <name>'");
      file.backend = std::string(f[1]);
    } else if (f[0] == "seed") {
      if (f.size() != 4) throw fail("expected 4 fields");
      Bytes seed = parse_hex_field(f[2], line_no);
      if (seed.size() != 8) throw fail("seed must be 8 bytes");
      file.seeds.push_back({std::string(f[1]), load_u64(seed),
                            parse_hex_field(f[3], line_no)});
    } else {
      if (f.size() != 4) throw fail("expected 4 fields");
      Bytes tag = parse_hex_field(f[0], line_no);
      if (tag.size() != 1) throw fail("tag must be one byte");
      PrfVector v{tag[0], parse_hex_field(f[1], line_no),
                  parse_hex_field(f[2], line_no),
                  parse_hex_field(f[3], line_no)};
      if (v.output.size() != 32) throw fail("output must be 32 bytes");
      file.prf.push_back(std::move(v));
    }
  }
  return file;
}

}  // namespace wgiot
