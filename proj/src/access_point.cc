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

#include "wgiot/access_point.hpp"

#include <algorithm>
#include <utility>

namespace wgiot {

namespace {

MapStep unexpected(MapState state, IcdIn subject, Tag tag) {
  std::string phase = "Unknown";
  if (auto it = state.records.find(subject); it != state.records.end()) {
    phase = std::string(record_phase(it->second));
  }
  return MapStep{std::move(state), {}, Unexpected{phase, tag}, "UnexpectedMessage"};
}

void accept(MapStep& step, MapRecord& rec, IcdIn icd, const PrfBackend& prf) {
  rec.session = derive_session_key(rec.sd, prf);
  rec.resync = false;
  rec.outstanding_challenge.reset();
  step.out.push_back({Peer::kIcd, icd, AuthAccept{}});
}

// Applies a remedy for a failed comparison. Unique challenge falls back to
// update value when the MAP has no challenge vectors left.
void apply_remedy(MapStep& step, MapRecord& rec, IcdIn icd, Remedy remedy,
                  DenyReason deny_reason) {
  if (remedy == Remedy::kUniqueChallenge && rec.vectors.empty()) {
    remedy = Remedy::kUpdateValue;
  }
  switch (remedy) {
    case Remedy::kUniqueChallenge: {
      ChallengeVector v = rec.vectors.front();
      rec.vectors.pop_front();
      rec.outstanding_challenge = v.expected;
      step.out.push_back({Peer::kIcd, icd, AuthenticationChallenge{v.wmap}});
      break;
    }
    case Remedy::kUpdateValue:
      if (rec.last_request) {
        step.out.push_back({Peer::kWbrac, icd, *rec.last_request});
      }
      break;
    case Remedy::kDeny:
      step.out.push_back({Peer::kIcd, icd, AccessDenied{deny_reason}});
      break;
  }
  step.note += "->" + std::string(remedy_name(remedy));
}

MapStep handle_auth_request(MapState state, const AuthRequest& req,
                            VirtualTime now, const PrfBackend& prf) {
  const IcdIn icd = req.icd_in;
  auto it = state.records.find(icd);
  if (it == state.records.end()) {
    MapStep step{std::move(state), {}, std::nullopt, "unknown-icd"};
    step.out.push_back({Peer::kIcd, icd, AccessDenied{DenyReason::kUnknownIcd}});
    return step;
  }
  if (it->second.pending) {
    return MapStep{std::move(state), {}, std::nullopt, "update-in-progress"};
  }

  Verdict verdict = map_verify(state, req, now);
  MapStep step{std::move(state), {}, std::nullopt, ""};
  MapRecord& rec = step.state.records.at(icd);
  rec.last_request = req;
  rec.outstanding_challenge.reset();

  if (verdict.accepted()) {
    step.note = "accept";
    accept(step, rec, icd, prf);
    return step;
  }
  if (rec.resync && !verdict.mismatched.has(Field::kAac) &&
      !verdict.mismatched.has(Field::kMpc)) {
    rec.expected_rmc = decompose_guid(req.guid).rmc;
    step.note = "accept-resync";
    accept(step, rec, icd, prf);
    return step;
  }
  rec.resync = false;
  step.note = "mismatch" + verdict.mismatched.to_string();
  apply_remedy(step, rec, icd, step.state.config.policy.remedy_for(verdict.mismatched),
               DenyReason::kPolicy);
  return step;
}

}  // namespace

std::string MismatchSet::to_string() const {
  std::string out = "{";
  auto add_name = [&](Field f, const char* name) {
    if (!has(f)) return;
    if (out.size() > 1) out += ",";
    out += name;
  };
  add_name(Field::kAac, "AAC");
  add_name(Field::kMpc, "MPC");
  add_name(Field::kRmc, "RMC");
  return out + "}";
}

std::string_view remedy_name(Remedy remedy) {
  switch (remedy) {
    case Remedy::kUniqueChallenge: return "challenge";
    case Remedy::kUpdateValue: return "update";
    case Remedy::kDeny: return "deny";
  }
  return "?";
}

MapPolicy MapPolicy::standard() {
  MapPolicy p;
  for (std::uint8_t bits = 1; bits < 8; ++bits) {
    MismatchSet m(bits);
    if (bits == 7) {
      p.by_mismatch[bits] = Remedy::kDeny;
    } else if (m.has(Field::kMpc) || m.has(Field::kRmc)) {
      p.by_mismatch[bits] = Remedy::kUpdateValue;
    } else {
      p.by_mismatch[bits] = Remedy::kUniqueChallenge;
    }
  }
  p.by_mismatch[0] = Remedy::kDeny;
  p.on_challenge_failure = Remedy::kDeny;
  return p;
}

std::string_view record_phase(const MapRecord& rec) {
  if (rec.pending) return "Updating";
  if (rec.outstanding_challenge) return "Challenging";
  if (rec.resync) return "Resync";
  if (rec.session) return "Authenticated";
  return "Idle";
}

bool MpcView::accepts(const Mpc& mpc, VirtualTime now) const {
  if (mpc == current) return true;
  return previous && mpc == *previous && now <= previous_valid_until;
}

void MpcView::rotate(const Mpc& next, VirtualTime now, VirtualTime grace) {
  previous = current;
  previous_valid_until = now + grace;
  current = next;
}

Verdict map_verify(const MapState& state, const AuthRequest& req,
                   VirtualTime now) {
  auto it = state.records.find(req.icd_in);
  if (it == state.records.end()) {
    throw Error(Errc::kUnknownIcd,
                "ICD " + std::to_string(raw(req.icd_in)) + " not provisioned");
  }
  const MapRecord& rec = it->second;
  Guid guid = decompose_guid(req.guid);
  Verdict v;
  if (guid.aac != rec.expected_aac) v.mismatched.add(Field::kAac);
  if (!state.mpc.accepts(guid.mpc, now)) v.mismatched.add(Field::kMpc);
  if (guid.rmc != rec.expected_rmc) v.mismatched.add(Field::kRmc);
  return v;
}

MapStep map_handle(MapState state, Peer from, IcdIn subject,
                   const WireMessage& msg, VirtualTime now,
                   const PrfBackend& prf) {
  const Tag tag = tag_of(msg);

  if (from == Peer::kWbrac) {
    if (const auto* apm = std::get_if<AccessParameterMessage>(&msg)) {
      state.mpc.rotate(apm->mpc, now, state.config.mpc_grace);
      MapStep step{std::move(state), {}, std::nullopt, "rotate"};
      step.out.push_back({Peer::kAllIcds, IcdIn{0}, *apm});
      return step;
    }
    auto it = state.records.find(subject);
    if (it == state.records.end()) return unexpected(std::move(state), subject, tag);
    MapRecord& rec = it->second;

    if (std::holds_alternative<ParameterUpdateOrder>(msg)) {
      rec.expected_rmc = rec.expected_rmc.next();
      MapStep step{std::move(state), {}, std::nullopt, "rmc+1"};
      step.out.push_back({Peer::kIcd, subject, msg});
      return step;
    }
    if (const auto* update = std::get_if<UpdateMessage>(&msg)) {
      if (update->icd_in != subject || !rec.pending || rec.pending->ordered) {
        return unexpected(std::move(state), subject, tag);
      }
      rec.pending->ordered = true;
      MapStep step{std::move(state), {}, std::nullopt, "order"};
      step.out.push_back({Peer::kIcd, subject, AccessParameterMessage{step.state.mpc.current}});
      step.out.push_back({Peer::kIcd, subject, UpdateOrder{update->rand}});
      return step;
    }
    if (const auto* response = std::get_if<MapChallengeResponse>(&msg)) {
      if (!rec.pending || !rec.pending->ordered || rec.pending->expected_sign) {
        return unexpected(std::move(state), subject, tag);
      }
      rec.pending->expected_sign = response->sig;
      MapStep step{std::move(state), {}, std::nullopt, "relay"};
      step.out.push_back({Peer::kIcd, subject, MapChallengeResponseOrder{response->sig}});
      return step;
    }
    return unexpected(std::move(state), subject, tag);
  }

  if (from != Peer::kIcd) return unexpected(std::move(state), subject, tag);

  if (std::holds_alternative<SecureActivation>(msg)) {
    return MapStep{std::move(state), {}, std::nullopt, "activation"};
  }
  if (const auto* req = std::get_if<AuthRequest>(&msg)) {
    return handle_auth_request(std::move(state), *req, now, prf);
  }

  auto it = state.records.find(subject);
  if (it == state.records.end()) return unexpected(std::move(state), subject, tag);
  MapRecord& rec = it->second;

  if (const auto* order = std::get_if<MobileAccessChallengeOrder>(&msg)) {
    if (!rec.pending || !rec.pending->ordered || rec.pending->expected_sign) {
      return unexpected(std::move(state), subject, tag);
    }
    MapStep step{std::move(state), {}, std::nullopt, "forward"};
    step.out.push_back({Peer::kIcd, subject, ChallengeAck{}});
    step.out.push_back({Peer::kWbrac, subject, MapChallengeForward{subject, order->to_map}});
    return step;
  }
  if (std::holds_alternative<UpdateConfirmation>(msg)) {
    if (!rec.pending || !rec.pending->expected_sign) {
      return unexpected(std::move(state), subject, tag);
    }
    const MapProvision& next = rec.pending->next;
    rec.sd = next.sd;
    rec.expected_aac = next.expected_aac;
    rec.vectors.assign(next.vectors.begin(), next.vectors.end());
    rec.pending.reset();
    rec.resync = true;
    rec.session.reset();
    MapStep step{std::move(state), {}, std::nullopt, "commit"};
    step.out.push_back({Peer::kWbrac, subject, UpdateConfirmation{}});
    return step;
  }
  if (std::holds_alternative<UpdateRejection>(msg)) {
    if (!rec.pending) return unexpected(std::move(state), subject, tag);
    rec.pending.reset();
    MapStep step{std::move(state), {}, std::nullopt, "rollback"};
    step.out.push_back({Peer::kWbrac, subject, UpdateRejection{}});
    return step;
  }
  if (const auto* answer = std::get_if<AuthChallengeAnswer>(&msg)) {
    if (!rec.outstanding_challenge) return unexpected(std::move(state), subject, tag);
    const bool match = answer->sig == *rec.outstanding_challenge;
    rec.outstanding_challenge.reset();
    MapStep step{std::move(state), {}, std::nullopt, ""};
    MapRecord& r = step.state.records.at(subject);
    if (match) {
      step.note = "challenge-pass";
      accept(step, r, subject, prf);
    } else {
      step.note = "challenge-fail";
      Remedy remedy = step.state.config.policy.on_challenge_failure;
      if (remedy == Remedy::kUniqueChallenge) remedy = Remedy::kDeny;
      apply_remedy(step, r, subject, remedy, DenyReason::kChallengeFailure);
    }
    return step;
  }
  return unexpected(std::move(state), subject, tag);
}

MapStep map_tick(MapState state, VirtualTime now) {
  MapStep step{std::move(state), {}, std::nullopt, ""};
  for (auto& [icd, rec] : step.state.records) {
    if (rec.pending && now > rec.pending->expires) {
      rec.pending.reset();
      step.out.push_back({Peer::kWbrac, icd, UpdateRejection{}});
      step.note = "pending-expired";
    }
  }
  return step;
}

std::optional<VirtualTime> map_next_deadline(const MapState& state) {
  std::optional<VirtualTime> earliest;
  for (const auto& [icd, rec] : state.records) {
    if (!rec.pending) continue;
    VirtualTime at = rec.pending->expires + VirtualTime{1};
    if (!earliest || at < *earliest) earliest = at;
  }
  return earliest;
}

MapState map_provision(MapState state, const MapProvision& provision) {
  MapRecord rec;
  rec.sd = provision.sd;
  rec.expected_aac = provision.expected_aac;
  rec.expected_rmc = provision.expected_rmc;
  rec.vectors.assign(provision.vectors.begin(), provision.vectors.end());
  state.records[provision.icd_in] = std::move(rec);
  return state;
}

MapState map_stage_update(MapState state, const MapProvision& next,
                          VirtualTime now) {
  auto it = state.records.find(next.icd_in);
  if (it == state.records.end()) {
    throw Error(Errc::kUnknownIcd,
                "ICD " + std::to_string(raw(next.icd_in)) + " not provisioned");
  }
  it->second.pending =
      PendingUpdate{next, std::nullopt, false, now + state.config.pending_ttl};
  return state;
}

}  // namespace wgiot
