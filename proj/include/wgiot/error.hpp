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

#ifndef WGIOT_ERROR_HPP_
#define WGIOT_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wgiot {

enum class Errc {
  kChallengeLength,
  kBadLength,
  kBadHex,
  kUnknownTag,
  kLengthMismatch,
  kTruncated,
  kNotIdle,
  kUnknownIcd,
  kDuplicateIcd,
  kTooEarly,
  kUpdateInProgress,
  kNoPendingUpdate,
  kRmcOverflow,
  kIoFailure,
  kParseError,
  kScenarioError,
  kNoEvents,
  kUnknownBackend,
};

std::string_view errc_name(Errc code);

// Every failure surfaced by the library. `line()` is non-zero for errors
// raised while parsing a line-oriented file.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::size_t line = 0)
      : std::runtime_error(what), code_(code), line_(line) {}

  Errc code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  Errc code_;
  std::size_t line_;
};

}  // namespace wgiot

#endif  // WGIOT_ERROR_HPP_
