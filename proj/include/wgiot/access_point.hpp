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

// Mobile access point (MAP) state machine.
//
// The MAP holds no device secrets. It compares presented GUIDs against
// expectations provisioned by the WBRAC, picks a remedy for mismatches
// (unique challenge, update value, or deny) from a MapPolicy, and relays the
// update-value exchange between the device and the WBRAC unchanged.
//
// Material that only the WBRAC can compute (expected AAC, IoT_SD_New,
// unique-challenge answers) reaches the MAP as a MapProvision over the
// trusted backhaul rather than as a wire frame.

#ifndef WGIOT_ACCESS_POINT_HPP_
#define WGIOT_ACCESS_POINT_HPP_

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wgiot/agent.hpp"
#include "wgiot/crypto.hpp"
#include "wgiot/prf.hpp"
#include "wgiot/wire.hpp"

namespace wgiot {

enum class Field : std::uint8_t { kAac = 1, kMpc = 2, kRmc = 4 };

// Subset of GUID fields that failed comparison.
class MismatchSet {
 public:
  constexpr MismatchSet() = default;
  constexpr explicit MismatchSet(std::uint8_t bits) : bits_(bits & 7) {}

  bool empty() const { return bits_ == 0; }
  bool has(Field f) const { return (bits_ & static_cast<std::uint8_t>(f)) != 0; }
  void add(Field f) { bits_ |= static_cast<std::uint8_t>(f); }
  std::uint8_t bits() const { return bits_; }
  std::string to_string() const;  // e.g. "{AAC,MPC}"

  friend bool operator==(const MismatchSet&, const MismatchSet&) = default;

 private:
  std::uint8_t bits_ = 0;
};

enum class Remedy { kUniqueChallenge, kUpdateValue, kDeny };

std::string_view remedy_name(Remedy remedy);

struct MapPolicy {
  // Indexed by MismatchSet::bits(); entry 0 is unused.
  std::array<Remedy, 8> by_mismatch{};
  // What to do when an AuthChallengeAnswer does not match.
  Remedy on_challenge_failure = Remedy::kDeny;

  // MPC or RMC drift -> update value; AAC alone -> unique challenge;
  // all three -> deny; failed challenge -> deny.
  static MapPolicy standard();
  Remedy remedy_for(MismatchSet mismatch) const {
    return by_mismatch[mismatch.bits()];
  }
};

// One precomputed unique challenge and the AUTH_SIGN_MAP the device must
// answer with. Consumed once.
struct ChallengeVector {
  Wmap wmap;
  AuthSignMap expected;
  friend bool operator==(const ChallengeVector&, const ChallengeVector&) = default;
};

struct MapProvision {
  IcdIn icd_in{};
  SdPair sd;
  Aac expected_aac;
  Rmc expected_rmc;
  std::vector<ChallengeVector> vectors;
  friend bool operator==(const MapProvision&, const MapProvision&) = default;
};

struct PendingUpdate {
  MapProvision next;                       // committed on UpdateConfirmation
  std::optional<AuthSignMap> expected_sign;  // set by MapChallengeResponse
  bool ordered = false;                    // UpdateOrder sent to the device
  VirtualTime expires{};
};

struct MapRecord {
  SdPair sd;
  Aac expected_aac;
  Rmc expected_rmc;
  std::deque<ChallengeVector> vectors;
  std::optional<AuthSignMap> outstanding_challenge;
  std::optional<AuthRequest> last_request;
  std::optional<PendingUpdate> pending;
  // Set by a confirmed update: the next request is checked on AAC and the
  // MPC window only, and its RMC is adopted.
  bool resync = false;
  std::optional<SessionKey> session;
};

std::string_view record_phase(const MapRecord& rec);

// Current MPC plus the immediately previous one, which stays acceptable
// until `previous_valid_until` to absorb broadcast lag.
struct MpcView {
  Mpc current;
  std::optional<Mpc> previous;
  VirtualTime previous_valid_until{};

  bool accepts(const Mpc& mpc, VirtualTime now) const;
  void rotate(const Mpc& next, VirtualTime now, VirtualTime grace);
};

struct MapConfig {
  Esn esn{};
  MapPolicy policy = MapPolicy::standard();
  VirtualTime mpc_grace{500};
  VirtualTime pending_ttl{5000};
};

struct MapState {
  MapConfig config;
  MpcView mpc;
  std::map<IcdIn, MapRecord> records;
};

enum class Peer { kIcd, kWbrac, kAllIcds };

struct Outbound {
  Peer to = Peer::kIcd;
  IcdIn subject{};
  WireMessage msg;
};

struct Verdict {
  MismatchSet mismatched;
  bool accepted() const { return mismatched.empty(); }
};

// Field-wise comparison against the stored record. Throws kUnknownIcd.
Verdict map_verify(const MapState& state, const AuthRequest& req,
                   VirtualTime now);

struct MapStep {
  MapState state;
  std::vector<Outbound> out;
  std::optional<Unexpected> unexpected;
  std::string note;
};

// `from` is the link the frame arrived on; `subject` names the device the
// exchange concerns (the link-layer address on the device side, the
// backhaul session on the WBRAC side).
MapStep map_handle(MapState state, Peer from, IcdIn subject,
                   const WireMessage& msg, VirtualTime now,
                   const PrfBackend& prf = reference_prf());

// Expires pending updates past their TTL, relaying an UpdateRejection to the
// WBRAC for each.
MapStep map_tick(MapState state, VirtualTime now);

std::optional<VirtualTime> map_next_deadline(const MapState& state);

// Installs or replaces the committed expectations for one device.
MapState map_provision(MapState state, const MapProvision& provision);

// Stages the material for an update the WBRAC has begun. Throws kUnknownIcd.
MapState map_stage_update(MapState state, const MapProvision& next,
                          VirtualTime now);

}  // namespace wgiot

#endif  // WGIOT_ACCESS_POINT_HPP_
