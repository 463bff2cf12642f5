#!/usr/bin/env python3
# Copyright 2026 The wg-iot Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent oracle for the frozen values in crypto_test.cc.

Uses Python's hashlib/hmac for the keyed hash and a from-scratch MT19937-64
for the seeded generator. Nothing here imports project code.
"""
import hashlib
import hmac


def prf(key: bytes, tag: int, msg: bytes) -> bytes:
    return hmac.new(key, bytes([tag]) + msg, hashlib.sha256).digest()


def be64(v: int) -> bytes:
    return v.to_bytes(8, "big")


class Mt64:
    def __init__(self, seed: int):
        self.mt = [0] * 312
        self.mt[0] = seed & 0xFFFFFFFFFFFFFFFF
        for i in range(1, 312):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & 0xFFFFFFFFFFFFFFFF
        self.idx = 312

    def next(self) -> int:
        if self.idx >= 312:
            for i in range(312):
                x = (self.mt[i] & 0xFFFFFFFF80000000) | (self.mt[(i + 1) % 312] & 0x7FFFFFFF)
                xa = x >> 1
                if x & 1:
                    xa ^= 0xB5026F5AA96619E9
                self.mt[i] = self.mt[(i + 156) % 312] ^ xa
            self.idx = 0
        y = self.mt[self.idx]
        self.idx += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & 0xFFFFFFFFFFFFFFFF

    def blob(self, draws: int) -> bytes:
        return b"".join(be64(self.next()) for _ in range(draws))


def main() -> None:
    # Sanity: the C++ standard pins the 10000th output of default-seeded mt19937_64.
    g = Mt64(5489)
    for _ in range(9999):
        g.next()
    assert g.next() == 9981545732273789042

    z8, z16, z32 = bytes(8), bytes(16), bytes(32)
    v0 = prf(z16, 0x01, z8 + z8 + z8 + z8)[:16]
    flipped = bytes([0x80]) + bytes(7)
    v1 = prf(z16, 0x01, flipped + z8 + z8 + z8)[:16]
    w0 = prf(z16, 0x02, z16 + z8)[:16]
    w1 = prf(z16, 0x02, bytes(15) + b"\x01" + z8)[:16]
    s0 = prf(z16, 0x03, z32 + z8 + z8)[:16]
    u0 = prf(z16, 0x03, bytes(10) + z8 + z8)[:16]
    k0 = prf(z8, 0x04, b"")[:16]
    print("V0", v0.hex())
    print("V1 (sd1 msb flipped)", v1.hex())
    print("W0", w0.hex(), "sd1", w0[:8].hex(), "sd2", w0[8:].hex())
    print("W1 (aac=..01)", w1.hex())
    print("S0", s0.hex())
    print("U0 (10-byte zero challenge)", u0.hex())
    print("K0", k0.hex())
    g = Mt64(42)
    print("seed42 to_map #1", g.blob(4).hex())
    print("seed42 to_map #2", g.blob(4).hex())
    print("seed42 wmap", Mt64(42).blob(1).hex())
    print("seed42 update_rand", Mt64(42).blob(2).hex())
    # Full 256-bit PRF outputs for the shipped vector file.
    for name, (k, t, m) in {
        "V0": (z16, 1, z8 * 4),
        "W0": (z16, 2, z16 + z8),
        "S0": (z16, 3, z32 + z8 + z8),
        "K0": (z8, 4, b""),
    }.items():
        print("full", name, prf(k, t, m).hex())


if __name__ == "__main__":
    main()
