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

#ifndef WGIOT_RNG_HPP_
#define WGIOT_RNG_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>

namespace wgiot {

// Exact rational probability num/den, 0 <= num <= den, den > 0.
struct Probability {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  bool is_zero() const { return num == 0; }
  bool is_one() const { return num == den; }
  friend bool operator==(const Probability&, const Probability&) = default;
};

// The simulator's only source of randomness: MT19937-64 as pinned by the
// C++ standard, so every seeded run reproduces on any conforming library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // N bytes from ceil(N/8) draws, each draw written big-endian.
  template <std::size_t N>
  std::array<std::uint8_t, N> blob() {
    static_assert(N % 8 == 0, "blob width must be a whole number of draws");
    std::array<std::uint8_t, N> out{};
    for (std::size_t i = 0; i < N; i += 8) {
      std::uint64_t draw = next();
      for (std::size_t j = 0; j < 8; ++j) {
        out[i + j] = static_cast<std::uint8_t>(draw >> (56 - 8 * j));
      }
    }
    return out;
  }

  // One draw. True with probability floor(draw * den / 2^64) < num.
  bool bernoulli(Probability p) {
    unsigned __int128 scaled =
        static_cast<unsigned __int128>(next()) * p.den;
    return static_cast<std::uint64_t>(scaled >> 64) < p.num;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wgiot

#endif  // WGIOT_RNG_HPP_
