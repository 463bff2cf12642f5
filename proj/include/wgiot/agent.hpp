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

#ifndef WGIOT_AGENT_HPP_
#define WGIOT_AGENT_HPP_

#include <chrono>
#include <string>

#include "wgiot/wire.hpp"

namespace wgiot {

// Virtual time in integer milliseconds; used for both instants and spans.
using VirtualTime = std::chrono::milliseconds;

// A frame the receiving state machine does not accept in its current state.
// The frame is dropped and the state left untouched.
struct Unexpected {
  std::string state;
  Tag tag{};

  friend bool operator==(const Unexpected&, const Unexpected&) = default;
};

}  // namespace wgiot

#endif  // WGIOT_AGENT_HPP_
