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

// Fixtures shared by the unit tests and the acceptance runner.

#ifndef WGIOT_TESTS_TEST_SUPPORT_HPP_
#define WGIOT_TESTS_TEST_SUPPORT_HPP_

#include <cstdint>
#include <string>

#include "wgiot/sim.hpp"
#include "wgiot/wbrac.hpp"

namespace wgiot::testing {

inline constexpr char kRegistryLine[] =
    "1 100 000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f "
    "00112233445566778899aabbccddeeff 0123456789abcdeffedcba9876543210 0";

inline SubscriberRecord subscriber(std::uint64_t icd = 1, std::uint64_t esn = 100,
                                   std::uint64_t salt = 0) {
  SubscriberRecord rec = parse_subscriber_line(kRegistryLine, 1);
  rec.wgie.icd_in = IcdIn{icd};
  rec.wgie.esn = Esn{esn};
  rec.sd.sd1 ^= salt;
  rec.sd.sd2 ^= salt * 3;
  return rec;
}

// One device on one access point, every link `delay` ms, started at t=0.
inline Scenario single_icd(VirtualTime delay = VirtualTime{0}) {
  Scenario s;
  s.subscribers.push_back(subscriber());
  s.default_link.delay = delay;
  s.events.push_back(TimedEvent{VirtualTime{0}, StartIcd{"icd-1"}});
  return s;
}

}  // namespace wgiot::testing

#endif  // WGIOT_TESTS_TEST_SUPPORT_HPP_
