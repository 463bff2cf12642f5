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

// Internet-connected device (ICD) state machine.
//
// The device authenticates by presenting GUID = AAC|MPC|RMC. When the
// access point asks for an update it derives IoT_SD_New from the WBRAC's
// random value, challenges the network with TO_MAP, and commits the new
// IoT_SD only if the network's AUTH_SIGN_MAP matches its own and arrives
// within one second of the challenge acknowledgement.

#ifndef WGIOT_ICD_HPP_
#define WGIOT_ICD_HPP_

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "wgiot/agent.hpp"
#include "wgiot/crypto.hpp"
#include "wgiot/prf.hpp"
#include "wgiot/rng.hpp"
#include "wgiot/wire.hpp"

namespace wgiot {

inline constexpr VirtualTime kConfirmationWindow{1000};

struct IcdIdle {
  friend bool operator==(const IcdIdle&, const IcdIdle&) = default;
};
struct IcdAwaitingAuthResult {
  friend bool operator==(const IcdAwaitingAuthResult&, const IcdAwaitingAuthResult&) = default;
};
struct IcdUpdateAwaitingAck {
  SdPair sd_new;
  ToMap to_map;
  AuthSignMap local_sign;
  friend bool operator==(const IcdUpdateAwaitingAck&, const IcdUpdateAwaitingAck&) = default;
};
struct IcdUpdateAwaitingConfirmation {
  SdPair sd_new;
  AuthSignMap local_sign;
  VirtualTime deadline{};  // ack arrival + 1 s; arrival at deadline is in time
  friend bool operator==(const IcdUpdateAwaitingConfirmation&, const IcdUpdateAwaitingConfirmation&) = default;
};
struct IcdAuthenticated {
  SessionKey session;
  friend bool operator==(const IcdAuthenticated&, const IcdAuthenticated&) = default;
};
struct IcdDenied {
  DenyReason reason{};
  friend bool operator==(const IcdDenied&, const IcdDenied&) = default;
};

using IcdState =
    std::variant<IcdIdle, IcdAwaitingAuthResult, IcdUpdateAwaitingAck,
                 IcdUpdateAwaitingConfirmation, IcdAuthenticated, IcdDenied>;

std::string_view state_name(const IcdState& state);

struct IcdConfig {
  WgieRecord wgie;
  ScAuthKey sc_auth_k;
  SdPair sd;
  Mpc mpc;  // most recent AccessParameterMessage value
  Rmc rmc;
  WbracId wbrac_id{};

  friend bool operator==(const IcdConfig&, const IcdConfig&) = default;
};

struct IcdStep {
  IcdState state;
  IcdConfig cfg;
  std::vector<WireMessage> out;
  std::optional<Unexpected> unexpected;
  // Short trace annotation, e.g. "commit", "reject", "timeout".
  std::string note;
};

// AAC for the configuration's current IoT_SD.
Aac icd_current_aac(const IcdConfig& cfg,
                    const PrfBackend& prf = reference_prf());

// Emits SecureActivation then AuthRequest. Throws kNotIdle.
IcdStep icd_start(IcdState state, IcdConfig cfg,
                  const PrfBackend& prf = reference_prf());

IcdStep icd_handle(IcdState state, IcdConfig cfg, const WireMessage& msg,
                   VirtualTime now, Rng& rng,
                   const PrfBackend& prf = reference_prf());

// Expires an update whose confirmation window has closed (now > deadline).
IcdStep icd_tick(IcdState state, IcdConfig cfg, VirtualTime now);

// Earliest time at which icd_tick would change the state.
std::optional<VirtualTime> icd_next_deadline(const IcdState& state);

}  // namespace wgiot

#endif  // WGIOT_ICD_HPP_
