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

#include "wgiot/icd.hpp"

#include <string>
#include <utility>

namespace wgiot {

namespace {

template <typename... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <typename... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

AuthRequest make_auth_request(const IcdConfig& cfg, const PrfBackend& prf) {
  Aac aac = icd_current_aac(cfg, prf);
  return AuthRequest{cfg.wgie.icd_in, cfg.wgie.esn,
                     compose_guid(aac, cfg.mpc, cfg.rmc)};
}

IcdStep unexpected(IcdState state, IcdConfig cfg, Tag tag) {
  Unexpected u{std::string(state_name(state)), tag};
  return IcdStep{std::move(state), std::move(cfg), {}, std::move(u), "UnexpectedMessage"};
}

}  // namespace

std::string_view state_name(const IcdState& state) {
  return std::visit(
      Overloaded{
          [](const IcdIdle&) { return std::string_view("Idle"); },
          [](const IcdAwaitingAuthResult&) {
            return std::string_view("AwaitingAuthResult");
          },
          [](const IcdUpdateAwaitingAck&) {
            return std::string_view("UpdateAwaitingAck");
          },
          [](const IcdUpdateAwaitingConfirmation&) {
            return std::string_view("UpdateAwaitingConfirmation");
          },
          [](const IcdAuthenticated&) {
            return std::string_view("Authenticated");
          },
          [](const IcdDenied&) { return std::string_view("Denied"); },
      },
      state);
}

Aac icd_current_aac(const IcdConfig& cfg, const PrfBackend& prf) {
  return authenticate_signature(cfg.sd, cfg.wgie.esn, cfg.wgie.icd_in,
                                cfg.sc_auth_k, prf);
}

IcdStep icd_start(IcdState state, IcdConfig cfg, const PrfBackend& prf) {
  if (!std::holds_alternative<IcdIdle>(state)) {
    throw Error(Errc::kNotIdle, "icd_start requires Idle, state is " +
                                    std::string(state_name(state)));
  }
  IcdStep step{IcdAwaitingAuthResult{}, std::move(cfg), {}, std::nullopt, "start"};
  step.out.push_back(SecureActivation{step.cfg.wgie.icd_in});
  step.out.push_back(make_auth_request(step.cfg, prf));
  return step;
}

IcdStep icd_handle(IcdState state, IcdConfig cfg, const WireMessage& msg,
                   VirtualTime now, Rng& rng, const PrfBackend& prf) {
  const Tag tag = tag_of(msg);

  // Accepted in every state.
  if (const auto* apm = std::get_if<AccessParameterMessage>(&msg)) {
    cfg.mpc = apm->mpc;
    return IcdStep{std::move(state), std::move(cfg), {}, std::nullopt, "mpc"};
  }
  if (std::holds_alternative<ParameterUpdateOrder>(msg)) {
    cfg.rmc = cfg.rmc.next();
    return IcdStep{std::move(state), std::move(cfg), {}, std::nullopt, "rmc+1"};
  }

  const bool awaiting = std::holds_alternative<IcdAwaitingAuthResult>(state);

  if (std::holds_alternative<AuthAccept>(msg)) {
    if (!awaiting) return unexpected(std::move(state), std::move(cfg), tag);
    SessionKey session = derive_session_key(cfg.sd, prf);
    return IcdStep{IcdAuthenticated{session}, std::move(cfg), {}, std::nullopt,
                   "authenticated"};
  }

  if (const auto* denied = std::get_if<AccessDenied>(&msg)) {
    if (!awaiting) return unexpected(std::move(state), std::move(cfg), tag);
    return IcdStep{IcdDenied{denied->reason}, std::move(cfg), {}, std::nullopt,
                   "denied"};
  }

  if (const auto* order = std::get_if<UpdateOrder>(&msg)) {
    const bool can_update = awaiting ||
                            std::holds_alternative<IcdIdle>(state) ||
                            std::holds_alternative<IcdAuthenticated>(state);
    if (!can_update) return unexpected(std::move(state), std::move(cfg), tag);
    SdPair sd_new = derive_update_sd(order->rand, cfg.wgie.esn,
                                     cfg.wgie.icd_in, cfg.sc_auth_k, prf);
    ToMap to_map = gen_to_map(rng);
    AuthSignMap local = authorization_signature(sd_new, to_map.span(),
                                                cfg.wgie.esn, cfg.wgie.icd_in, prf);
    IcdStep step{IcdUpdateAwaitingAck{sd_new, to_map, local}, std::move(cfg),
                 {}, std::nullopt, "update"};
    step.out.push_back(MobileAccessChallengeOrder{to_map});
    return step;
  }

  if (std::holds_alternative<ChallengeAck>(msg)) {
    const auto* pending = std::get_if<IcdUpdateAwaitingAck>(&state);
    if (pending == nullptr) return unexpected(std::move(state), std::move(cfg), tag);
    IcdUpdateAwaitingConfirmation next{pending->sd_new, pending->local_sign,
                                       now + kConfirmationWindow};
    return IcdStep{next, std::move(cfg), {}, std::nullopt, "ack"};
  }

  if (const auto* order = std::get_if<MapChallengeResponseOrder>(&msg)) {
    const auto* pending = std::get_if<IcdUpdateAwaitingConfirmation>(&state);
    if (pending == nullptr) return unexpected(std::move(state), std::move(cfg), tag);
    if (now > pending->deadline) {
      // Late: same outcome as the timer firing first.
      return IcdStep{IcdIdle{}, std::move(cfg), {}, std::nullopt, "timeout"};
    }
    if (order->sig != pending->local_sign) {
      IcdStep step{IcdIdle{}, std::move(cfg), {}, std::nullopt, "reject"};
      step.out.push_back(UpdateRejection{});
      return step;
    }
    cfg.sd = pending->sd_new;
    IcdStep step{IcdAwaitingAuthResult{}, std::move(cfg), {}, std::nullopt, "commit"};
    step.out.push_back(UpdateConfirmation{});
    step.out.push_back(make_auth_request(step.cfg, prf));
    return step;
  }

  if (const auto* challenge = std::get_if<AuthenticationChallenge>(&msg)) {
    if (!awaiting) return unexpected(std::move(state), std::move(cfg), tag);
    UniqueChallenge composite =
        compose_unique_challenge(challenge->wmap, cfg.wbrac_id);
    AuthSignMap answer = authorization_signature(
        cfg.sd, composite, cfg.wgie.esn, cfg.wgie.icd_in, prf);
    IcdStep step{std::move(state), std::move(cfg), {}, std::nullopt, "answer"};
    step.out.push_back(AuthChallengeAnswer{answer});
    return step;
  }

  // Network-side frames never addressed to a device.
  return unexpected(std::move(state), std::move(cfg), tag);
}

IcdStep icd_tick(IcdState state, IcdConfig cfg, VirtualTime now) {
  if (const auto* pending = std::get_if<IcdUpdateAwaitingConfirmation>(&state)) {
    if (now > pending->deadline) {
      return IcdStep{IcdIdle{}, std::move(cfg), {}, std::nullopt, "timeout"};
    }
  }
  return IcdStep{std::move(state), std::move(cfg), {}, std::nullopt, ""};
}

std::optional<VirtualTime> icd_next_deadline(const IcdState& state) {
  if (const auto* pending = std::get_if<IcdUpdateAwaitingConfirmation>(&state)) {
    return pending->deadline + VirtualTime{1};
  }
  return std::nullopt;
}

}  // namespace wgiot
