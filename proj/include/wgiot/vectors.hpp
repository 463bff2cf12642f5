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

// Conformance vector file.
//
//   # comment lines and blank lines are ignored
//   backend <name>
//   <tag-hex2> <hex(key)> <hex(message)> <hex(output)>     PRF evaluation
//   seed <kind> <hex(seed, 8 bytes)> <hex(output)>          generator draw
//
// An empty key or message is written as "-". PRF outputs are the full
// 256-bit value; generator kinds are to_map, to_map_second, wmap,
// update_rand.

#ifndef WGIOT_VECTORS_HPP_
#define WGIOT_VECTORS_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wgiot/bytes.hpp"
#include "wgiot/prf.hpp"

namespace wgiot {

struct PrfVector {
  std::uint8_t tag = 0;
  Bytes key;
  Bytes message;
  Bytes output;

  friend bool operator==(const PrfVector&, const PrfVector&) = default;
};

struct SeedVector {
  std::string kind;
  std::uint64_t seed = 0;
  Bytes output;

  friend bool operator==(const SeedVector&, const SeedVector&) = default;
};

struct VectorFile {
  std::string backend;
  std::vector<PrfVector> prf;
  std::vector<SeedVector> seeds;

  friend bool operator==(const VectorFile&, const VectorFile&) = default;
};

VectorFile generate_vectors(const PrfBackend& prf);
std::string format_vectors(const VectorFile& file);
VectorFile parse_vectors(std::string_view text);  // throws kParseError(line)

}  // namespace wgiot

#endif  // WGIOT_VECTORS_HPP_
