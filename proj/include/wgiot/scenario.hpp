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

// Scenario files: a network description plus expectations, in INI-like
// sections. '#' starts a comment. See docs/scenarios.md for the grammar.
//
//   [registry]   <icd_in> <esn> <key hex> <k hex> <sd hex> <rmc>
//   [network]    wbrac-id N | mpc-period MS | mpc-grace MS | pending-ttl MS
//                vectors N | backend NAME | challenge-failure REMEDY
//                policy FIELD[+FIELD...] REMEDY
//   [links]      default|<from> -> <to>  [delay=MS] [drop=A/B] [dup=A/B]
//   [events]     start <icd> at T | rotate at T | param-update <icd> at T
//                desync-mpc <icd> at T
//   [adversary]  capture <Tag> | replay <i> at T | corrupt <Tag> bit N
//                inject <hex frame> from <A> to <B> [subject N] at T
//   [expect]     <agent> reaches <State> | <agent> ends-in <State>
//                frame-count <Tag> <op> N | trace-golden <path>
//                sd-synced <icd> | session-agreed <icd>

#ifndef WGIOT_SCENARIO_HPP_
#define WGIOT_SCENARIO_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wgiot/sim.hpp"

namespace wgiot {

struct ExpectReaches {
  std::string agent;
  std::string state;
};
struct ExpectEndsIn {
  std::string agent;
  std::string state;
};
struct ExpectFrameCount {
  Tag tag{};
  std::string op;  // == != < <= > >=
  std::size_t count = 0;
};
struct ExpectTraceGolden {
  std::filesystem::path path;  // resolved against the scenario's directory
};
struct ExpectSdSynced {
  std::string icd;
};
struct ExpectSessionAgreed {
  std::string icd;
};

struct Expectation {
  std::size_t line = 0;
  std::string text;
  std::variant<ExpectReaches, ExpectEndsIn, ExpectFrameCount, ExpectTraceGolden,
               ExpectSdSynced, ExpectSessionAgreed>
      what;
};

struct ScenarioFile {
  Scenario scenario;
  std::vector<Expectation> expectations;
};

// Throws kParseError carrying the 1-based line number.
ScenarioFile parse_scenario(std::string_view text,
                            const std::filesystem::path& base_dir = {});
// Throws kIoFailure or kParseError.
ScenarioFile load_scenario(const std::filesystem::path& path);

struct ExpectResult {
  const Expectation* expectation = nullptr;
  bool passed = false;
  std::string detail;
};

// Evaluates every expectation against a finished simulation. A missing or
// unreadable golden file is a failed expectation, not an exception.
std::vector<ExpectResult> evaluate(const ScenarioFile& file,
                                   const Simulation& sim);

// Delivered (not dropped) frames of `tag` in a trace.
std::size_t frame_count(const Trace& trace, Tag tag);

}  // namespace wgiot

#endif  // WGIOT_SCENARIO_HPP_
