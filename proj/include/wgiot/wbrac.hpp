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

// Wireless base register authentication center (WBRAC): subscriber
// registry, MPC schedule, and the server half of the update-value and
// unique-challenge computations.
//
// Registry file format (line oriented, secrets hex encoded; simulator use
// only, not a production key store):
//
//   wgiot-registry v1
//   mpc <period_ms> <last_rotation_ms> <hex(current)> [<hex(prior)> <from_ms> <until_ms>]...
//   <icd_in> <esn> <hex(key256)> <hex(k128)> <hex(sd128)> <rmc_decimal>
//
// icd_in and esn are decimal. Pending updates are runtime state and are not
// written.

#ifndef WGIOT_WBRAC_HPP_
#define WGIOT_WBRAC_HPP_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "wgiot/access_point.hpp"
#include "wgiot/agent.hpp"
#include "wgiot/crypto.hpp"
#include "wgiot/prf.hpp"
#include "wgiot/rng.hpp"
#include "wgiot/wire.hpp"

namespace wgiot {

struct SubscriberRecord {
  WgieRecord wgie;
  ScAuthKey sc_auth_k;
  SdPair sd;
  Rmc rmc;
  std::optional<SdPair> pending_sd_new;

  IcdIn icd_in() const { return wgie.icd_in; }
  friend bool operator==(const SubscriberRecord&, const SubscriberRecord&) = default;
};

struct MpcEntry {
  Mpc mpc;
  VirtualTime valid_from{};
  VirtualTime valid_until{};
  friend bool operator==(const MpcEntry&, const MpcEntry&) = default;
};

struct MpcSchedule {
  VirtualTime period{1000};
  VirtualTime last_rotation{};
  Mpc current;
  std::deque<MpcEntry> history;  // newest first
  std::size_t history_capacity = 2;
  friend bool operator==(const MpcSchedule&, const MpcSchedule&) = default;
};

// Subscriber registry: many concurrent readers or one writer; mutations of
// a record go through update() and are serialized.
class Registry {
 public:
  Registry() = default;
  Registry(const Registry& other);
  Registry& operator=(const Registry& other);

  // Throws kDuplicateIcd.
  void insert(SubscriberRecord record);
  std::optional<SubscriberRecord> find(IcdIn icd) const;
  // Applies `fn` to the stored record under the writer lock. Throws
  // kUnknownIcd.
  void update(IcdIn icd, const std::function<void(SubscriberRecord&)>& fn);
  std::vector<SubscriberRecord> snapshot() const;  // ordered by icd_in
  std::size_t size() const;

  MpcSchedule schedule() const;
  void set_schedule(MpcSchedule schedule);

  friend bool operator==(const Registry& a, const Registry& b);

 private:
  mutable std::shared_mutex mutex_;
  std::map<IcdIn, SubscriberRecord> records_;
  MpcSchedule schedule_;
};

struct ProvisionResult {
  SubscriberRecord record;
  MapProvision map_material;
};

// Creates a subscriber with a fresh random IoT_SD and rmc = 0, and derives
// the MAP's expectations for it. Throws kDuplicateIcd.
ProvisionResult wbrac_provision(Registry& registry, const WgieRecord& wgie,
                                const ScAuthKey& k, Rng& rng, WbracId wbrac_id,
                                std::size_t vectors,
                                const PrfBackend& prf = reference_prf());

// Expected AAC and `count` unique-challenge vectors for `sd`.
MapProvision map_material(const SubscriberRecord& rec, const SdPair& sd,
                          WbracId wbrac_id, std::size_t count, Rng& rng,
                          const PrfBackend& prf = reference_prf());

struct RotateResult {
  MpcSchedule schedule;
  AccessParameterMessage broadcast;
};

// Throws kTooEarly unless now >= last_rotation + period.
RotateResult wbrac_rotate_mpc(MpcSchedule schedule, Rng& rng, VirtualTime now);

struct BeginUpdateResult {
  SubscriberRecord record;
  UpdateMessage message;
};

// Throws kUpdateInProgress.
BeginUpdateResult wbrac_begin_update(SubscriberRecord rec, Rng& rng,
                                     const PrfBackend& prf = reference_prf());

// Throws kNoPendingUpdate.
MapChallengeResponse wbrac_answer_challenge(
    const SubscriberRecord& rec, const ToMap& to_map,
    const PrfBackend& prf = reference_prf());

enum class UpdateOutcome { kConfirmed, kRejected };

// Throws kNoPendingUpdate.
SubscriberRecord wbrac_commit(SubscriberRecord rec, UpdateOutcome outcome);

struct WbracConfig {
  WbracId id{};
  std::size_t vectors_per_provision = 4;
};

struct WbracStep {
  std::vector<Outbound> out;           // to the MAP the frame came from
  std::vector<MapProvision> backhaul;  // staged update material for the MAP
  std::optional<Unexpected> unexpected;
  std::string note;
};

// Handles a frame relayed by a MAP about device `subject`.
WbracStep wbrac_handle(Registry& registry, const WbracConfig& config,
                       IcdIn subject, const WireMessage& msg, Rng& rng,
                       const PrfBackend& prf = reference_prf());

// One `<icd_in> <esn> <key> <k> <sd> <rmc>` line. Throws kParseError(line_no).
SubscriberRecord parse_subscriber_line(std::string_view line, std::size_t line_no);

std::string format_registry(const Registry& registry);
Registry parse_registry(std::string_view text);  // throws kParseError(line)
void registry_save(const Registry& registry, const std::filesystem::path& path);
Registry registry_load(const std::filesystem::path& path);  // kIoFailure/kParseError

}  // namespace wgiot

#endif  // WGIOT_WBRAC_HPP_
