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

// Deterministic discrete-event harness hosting one WBRAC, one MAP per ESN
// and one ICD per subscriber.
//
// Agents are named "wbrac", "map-<esn>" and "icd-<icd_in>" (decimal).
// Events run in (time, insertion sequence) order. Frames travel as encoded
// bytes and are decoded by the receiver, so corrupted or injected frames
// exercise the real codec. All randomness comes from two MT19937-64
// streams derived from the run seed: one for protocol nonces, one for link
// drop/duplication draws.
//
// Trace serialization: a header line, then one tab-separated line per event
//
//   time  sender  receiver  tag  hex(payload)  note
//
// where note starts with "state=<receiver state>" for deliveries. The last
// line is "END" with note "quiescent" or "max-time"; a run that dispatches
// no event has only the header.

#ifndef WGIOT_SIM_HPP_
#define WGIOT_SIM_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wgiot/access_point.hpp"
#include "wgiot/agent.hpp"
#include "wgiot/icd.hpp"
#include "wgiot/prf.hpp"
#include "wgiot/rng.hpp"
#include "wgiot/wbrac.hpp"
#include "wgiot/wire.hpp"

namespace wgiot {

struct LinkModel {
  VirtualTime delay{0};
  Probability drop;
  Probability dup;
  friend bool operator==(const LinkModel&, const LinkModel&) = default;
};

// Adversary actions. Capture and corrupt are standing filters on frames in
// flight; replay and inject fire at their time.
struct CaptureMatching {
  Tag tag{};
};
struct ReplayCaptured {
  std::size_t index = 0;
  VirtualTime at{};
};
struct Inject {
  Bytes frame;
  std::string from;
  std::string to;
  IcdIn subject{};
  VirtualTime at{};
};
struct CorruptBit {
  Tag tag{};
  std::size_t bit = 0;  // MSB-first index into the encoded frame
};
using AdversaryAction = std::variant<CaptureMatching, ReplayCaptured, Inject, CorruptBit>;

struct AdversaryScript {
  std::vector<AdversaryAction> actions;
};

// Scheduled network events.
struct StartIcd {
  std::string icd;
};
struct RotateMpc {};
struct ParamUpdate {
  std::string icd;
};
// Overwrites the device's stored MPC with a random value, as if it had
// missed the broadcasts.
struct DesyncMpc {
  std::string icd;
};
struct TimedEvent {
  VirtualTime at{};
  std::variant<StartIcd, RotateMpc, ParamUpdate, DesyncMpc> what;
};

struct NetworkOptions {
  WbracId wbrac_id{0x57425241};
  VirtualTime mpc_period{1000};
  VirtualTime mpc_grace{500};
  VirtualTime pending_ttl{5000};
  std::size_t vectors_per_provision = 4;
  MapPolicy policy = MapPolicy::standard();
  std::string backend = "hmac-sha256";
};

struct Scenario {
  std::vector<SubscriberRecord> subscribers;
  NetworkOptions options;
  LinkModel default_link;
  std::map<std::pair<std::string, std::string>, LinkModel> links;
  std::vector<TimedEvent> events;
  AdversaryScript adversary;
};

struct TraceEntry {
  VirtualTime time{};
  std::string sender;
  std::string receiver;
  std::string tag;
  Bytes payload;
  std::string note;
  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct Trace {
  std::string header;
  std::vector<TraceEntry> entries;
};

std::string serialize_trace(const Trace& trace);

struct Counters {
  std::size_t sent = 0;        // frames handed to a link by an agent
  std::size_t delivered = 0;   // receiver invoked (includes copies below)
  std::size_t dropped = 0;
  std::size_t duplicated = 0;  // extra copies created by the link
  std::size_t injected = 0;
  std::size_t replayed = 0;
};

std::string icd_name(IcdIn icd);
std::string map_name(Esn esn);
inline constexpr const char* kWbracName = "wbrac";

// Event-queue internals of Simulation.
namespace sim_detail {

enum class Origin { kAgent, kDuplicate, kReplay, kInject };
struct Envelope {
  std::string from;
  std::string to;
  IcdIn subject{};
  Bytes frame;
};
struct Deliver {
  Envelope env;
  bool dropped = false;
  Origin origin = Origin::kAgent;
};
struct Tick {
  std::string agent;
};
struct FireReplay {
  std::size_t index = 0;
};
struct Event {
  VirtualTime at{};
  std::uint64_t seq = 0;
  std::variant<Deliver, Tick, TimedEvent, FireReplay> kind;
};
struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return a.at != b.at ? a.at > b.at : a.seq > b.seq;
  }
};

}  // namespace sim_detail

class Simulation {
 public:
  // Throws kScenarioError for events or adversary actions naming unknown
  // agents, and kUnknownBackend for an unknown PRF.
  Simulation(Scenario scenario, std::uint64_t seed,
             VirtualTime max_time = VirtualTime{60000});

  bool has_events() const { return !queue_.empty(); }
  VirtualTime next_event_time() const;

  // Pops and dispatches exactly one event. Throws kNoEvents.
  void step();

  // Steps until no event is due at or before max_time, then appends the END
  // line. Idempotent.
  const Trace& run();

  VirtualTime now() const { return now_; }
  const Trace& trace() const { return trace_; }
  const Counters& counters() const { return counters_; }
  const PrfBackend& prf() const { return *prf_; }

  std::vector<std::string> icd_names() const;
  const IcdState& icd_state(const std::string& icd) const;
  const IcdConfig& icd_config(const std::string& icd) const;
  const MapState& map_state(const std::string& map) const;
  const Registry& registry() const { return registry_; }
  // Every state name an agent has been observed in after handling an event.
  std::set<std::string> states_reached(const std::string& agent) const;
  // Final state name of an agent (ICD state, or "Pending"/"Ready" for the
  // WBRAC, or a summary for a MAP).
  std::string state_of(const std::string& agent) const;

  // Schedules a delivery that bypasses the link model, exactly as an
  // adversary transmitter would.
  void inject(std::string from, std::string to, IcdIn subject, Bytes frame,
              VirtualTime at);

 private:
  using Origin = sim_detail::Origin;
  using Envelope = sim_detail::Envelope;
  using Deliver = sim_detail::Deliver;
  using Tick = sim_detail::Tick;
  using FireReplay = sim_detail::FireReplay;
  using Event = sim_detail::Event;
  using Later = sim_detail::Later;

  struct IcdSlot {
    IcdState state;
    IcdConfig cfg;
    std::string map;
  };

  void schedule(VirtualTime at, decltype(Event::kind) kind);
  void send(const std::string& from, const std::string& to, IcdIn subject,
            const WireMessage& msg);
  void record(std::string sender, std::string receiver, std::string tag,
              Bytes payload, std::string note);
  void note_state(const std::string& agent, std::string state);
  void schedule_ticks(const std::string& agent);
  const LinkModel& link(const std::string& from, const std::string& to) const;

  void on_deliver(Deliver d);
  void on_tick(const Tick& t);
  void on_timed(const TimedEvent& e);
  void on_replay(const FireReplay& r);

  std::string deliver_to_icd(const Envelope& env, const WireMessage& msg);
  std::string deliver_to_map(const Envelope& env, const WireMessage& msg);
  std::string deliver_to_wbrac(const Envelope& env, const WireMessage& msg);
  void route_map_output(const std::string& map, const std::vector<Outbound>& out,
                        std::string& note);
  std::string map_phase(const std::string& map, IcdIn subject) const;
  bool is_agent(const std::string& name) const;

  Scenario scenario_;
  std::uint64_t seed_;
  VirtualTime max_time_;
  std::unique_ptr<PrfBackend> prf_;
  Rng proto_rng_;
  Rng link_rng_;
  Registry registry_;
  WbracConfig wbrac_cfg_;
  std::map<std::string, MapState> maps_;
  std::map<std::string, IcdSlot> icds_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_seq_ = 0;
  VirtualTime now_{0};
  Trace trace_;
  Counters counters_;
  std::vector<Envelope> captured_;
  std::vector<bool> corrupt_fired_;
  std::map<std::string, std::set<std::string>> reached_;
  std::set<std::pair<std::string, std::int64_t>> ticks_scheduled_;
  bool finished_ = false;
};

// Runs a scenario to quiescence (or max_time) and returns its trace.
Trace sim_run(const Scenario& scenario, std::uint64_t seed,
              VirtualTime max_time = VirtualTime{60000});

}  // namespace wgiot

#endif  // WGIOT_SIM_HPP_
