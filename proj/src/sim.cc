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

#include "wgiot/sim.hpp"

#include <sstream>

namespace wgiot {

namespace {

constexpr std::uint64_t kLinkSeedMix = 0x9E3779B97F4A7C15ull;

std::string frame_tag(ByteSpan frame) {
  if (frame.empty()) return "-";
  if (auto tag = tag_from_byte(frame[0])) return std::string(tag_name(*tag));
  std::uint8_t b[1] = {frame[0]};
  return "0x" + to_hex(b);
}

Bytes frame_payload(ByteSpan frame) {
  if (frame.size() <= kHeaderSize) return {};
  return Bytes(frame.begin() + kHeaderSize, frame.end());
}

void append_note(std::string& note, std::string_view extra) {
  if (extra.empty()) return;
  if (!note.empty()) note += ' ';
  note += extra;
}

}  // namespace

std::string icd_name(IcdIn icd) { return "icd-" + std::to_string(raw(icd)); }
std::string map_name(Esn esn) { return "map-" + std::to_string(raw(esn)); }

std::string serialize_trace(const Trace& trace) {
  std::ostringstream out;
  out << trace.header << '\n';
  for (const auto& e : trace.entries) {
    out << e.time.count() << '\t' << e.sender << '\t' << e.receiver << '\t'
        << e.tag << '\t' << (e.payload.empty() ? "-" : to_hex(e.payload))
        << '\t' << (e.note.empty() ? "-" : e.note) << '\n';
  }
  return out.str();
}

Simulation::Simulation(Scenario scenario, std::uint64_t seed,
                       VirtualTime max_time)
    : scenario_(std::move(scenario)),
      seed_(seed),
      max_time_(max_time),
      prf_(make_backend(scenario_.options.backend)),
      proto_rng_(seed),
      link_rng_(seed ^ kLinkSeedMix) {
  const NetworkOptions& opt = scenario_.options;
  wbrac_cfg_ = WbracConfig{opt.wbrac_id, opt.vectors_per_provision};
  trace_.header = "#wgiot-trace v1 backend=" + std::string(prf_->name()) +
                  " seed=" + std::to_string(seed);

  MpcSchedule mpc_schedule;
  mpc_schedule.period = opt.mpc_period;
  mpc_schedule.current = gen_mpc(proto_rng_);
  registry_.set_schedule(mpc_schedule);

  for (const auto& sub : scenario_.subscribers) {
    SubscriberRecord rec = sub;
    rec.pending_sd_new.reset();
    try {
      registry_.insert(rec);
    } catch (const Error& e) {
      throw Error(Errc::kScenarioError, e.what());
    }
    const std::string mname = map_name(rec.wgie.esn);
    auto [it, inserted] = maps_.try_emplace(mname);
    if (inserted) {
      it->second.config = MapConfig{rec.wgie.esn, opt.policy, opt.mpc_grace,
                                    opt.pending_ttl};
      it->second.mpc.current = mpc_schedule.current;
    }
    it->second = map_provision(
        std::move(it->second),
        map_material(rec, rec.sd, opt.wbrac_id, opt.vectors_per_provision,
                     proto_rng_, *prf_));
    IcdConfig cfg{rec.wgie, rec.sc_auth_k, rec.sd, mpc_schedule.current, rec.rmc,
                  opt.wbrac_id};
    icds_.emplace(icd_name(rec.icd_in()), IcdSlot{IcdIdle{}, cfg, mname});
  }

  for (const auto& ev : scenario_.events) {
    std::visit(
        [&](const auto& what) {
          using T = std::decay_t<decltype(what)>;
          if constexpr (!std::is_same_v<T, RotateMpc>) {
            if (!icds_.contains(what.icd)) {
              throw Error(Errc::kScenarioError, "unknown agent '" + what.icd + "'");
            }
          }
        },
        ev.what);
    schedule(ev.at, ev);
  }

  for (const auto& action : scenario_.adversary.actions) {
    if (const auto* replay = std::get_if<ReplayCaptured>(&action)) {
      schedule(replay->at, FireReplay{replay->index});
    } else if (const auto* inj = std::get_if<Inject>(&action)) {
      if (!is_agent(inj->to)) {
        throw Error(Errc::kScenarioError, "inject to unknown agent '" + inj->to + "'");
      }
      schedule(inj->at, Deliver{Envelope{inj->from, inj->to, inj->subject, inj->frame},
                                false, Origin::kInject});
    }
  }
  corrupt_fired_.assign(scenario_.adversary.actions.size(), false);
}

bool Simulation::is_agent(const std::string& name) const {
  return name == kWbracName || maps_.contains(name) || icds_.contains(name);
}

VirtualTime Simulation::next_event_time() const {
  if (queue_.empty()) throw Error(Errc::kNoEvents, "no pending events");
  return queue_.top().at;
}

void Simulation::schedule(VirtualTime at, decltype(Event::kind) kind) {
  queue_.push(Event{at, next_seq_++, std::move(kind)});
}

const LinkModel& Simulation::link(const std::string& from,
                                  const std::string& to) const {
  auto it = scenario_.links.find({from, to});
  return it == scenario_.links.end() ? scenario_.default_link : it->second;
}

void Simulation::send(const std::string& from, const std::string& to,
                      IcdIn subject, const WireMessage& msg) {
  const LinkModel& lm = link(from, to);
  ++counters_.sent;
  bool drop = false;
  bool dup = false;
  if (!lm.drop.is_zero() || !lm.dup.is_zero()) {
    drop = link_rng_.bernoulli(lm.drop);
    dup = link_rng_.bernoulli(lm.dup);
  }
  Envelope env{from, to, subject, encode(msg)};
  const VirtualTime at = now_ + lm.delay;
  if (drop) {
    schedule(at, Deliver{std::move(env), true, Origin::kAgent});
    return;
  }
  if (dup) {
    ++counters_.duplicated;
    schedule(at, Deliver{env, false, Origin::kAgent});
    schedule(at, Deliver{std::move(env), false, Origin::kDuplicate});
    return;
  }
  schedule(at, Deliver{std::move(env), false, Origin::kAgent});
}

void Simulation::record(std::string sender, std::string receiver,
                        std::string tag, Bytes payload, std::string note) {
  trace_.entries.push_back(TraceEntry{now_, std::move(sender), std::move(receiver),
                                      std::move(tag), std::move(payload),
                                      std::move(note)});
}

void Simulation::note_state(const std::string& agent, std::string state) {
  reached_[agent].insert(std::move(state));
}

void Simulation::schedule_ticks(const std::string& agent) {
  std::optional<VirtualTime> at;
  if (auto it = icds_.find(agent); it != icds_.end()) {
    at = icd_next_deadline(it->second.state);
  } else if (auto mit = maps_.find(agent); mit != maps_.end()) {
    at = map_next_deadline(mit->second);
  }
  if (!at) return;
  if (ticks_scheduled_.insert({agent, at->count()}).second) {
    schedule(*at, Tick{agent});
  }
}

void Simulation::step() {
  if (queue_.empty()) throw Error(Errc::kNoEvents, "no pending events");
  Event ev = queue_.top();
  queue_.pop();
  now_ = ev.at;
  std::visit(
      [this](auto& kind) {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, Deliver>) on_deliver(std::move(kind));
        else if constexpr (std::is_same_v<T, Tick>) on_tick(kind);
        else if constexpr (std::is_same_v<T, TimedEvent>) on_timed(kind);
        else on_replay(kind);
      },
      ev.kind);
}

const Trace& Simulation::run() {
  if (finished_) return trace_;
  bool any = false;
  while (!queue_.empty() && queue_.top().at <= max_time_) {
    step();
    any = true;
  }
  // An empty scenario leaves an empty trace.
  if (any) record("-", "-", "END", {}, queue_.empty() ? "quiescent" : "max-time");
  finished_ = true;
  return trace_;
}

void Simulation::on_deliver(Deliver d) {
  Envelope& env = d.env;
  std::string note;
  if (d.origin == Origin::kReplay) note = "replayed";
  if (d.origin == Origin::kInject) note = "injected";

  if (!d.dropped) {
    const auto& actions = scenario_.adversary.actions;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (const auto* cap = std::get_if<CaptureMatching>(&actions[i])) {
        if (!env.frame.empty() && env.frame[0] == static_cast<std::uint8_t>(cap->tag)) {
          captured_.push_back(env);
          break;
        }
      }
    }
    for (std::size_t i = 0; i < actions.size(); ++i) {
      const auto* cor = std::get_if<CorruptBit>(&actions[i]);
      if (cor == nullptr || corrupt_fired_[i] || env.frame.empty() ||
          env.frame[0] != static_cast<std::uint8_t>(cor->tag) ||
          cor->bit >= env.frame.size() * 8) {
        continue;
      }
      env.frame[cor->bit / 8] ^= static_cast<std::uint8_t>(0x80u >> (cor->bit % 8));
      corrupt_fired_[i] = true;
      append_note(note, "corrupted");
    }
  }

  if (d.dropped) {
    ++counters_.dropped;
    record(env.from, env.to, frame_tag(env.frame), frame_payload(env.frame), "dropped");
    return;
  }
  ++counters_.delivered;
  if (d.origin == Origin::kReplay) ++counters_.replayed;
  if (d.origin == Origin::kInject) ++counters_.injected;

  WireMessage msg;
  try {
    msg = decode(env.frame);
  } catch (const Error& e) {
    std::string full = "decode-error:" + std::string(errc_name(e.code()));
    append_note(full, note);
    record(env.from, env.to, frame_tag(env.frame), frame_payload(env.frame), full);
    return;
  }

  std::string outcome;
  if (icds_.contains(env.to)) outcome = deliver_to_icd(env, msg);
  else if (maps_.contains(env.to)) outcome = deliver_to_map(env, msg);
  else if (env.to == kWbracName) outcome = deliver_to_wbrac(env, msg);
  else outcome = "no-route";

  std::string full = outcome;
  append_note(full, note);
  record(env.from, env.to, frame_tag(env.frame), frame_payload(env.frame), full);
  schedule_ticks(env.to);
}

std::string Simulation::deliver_to_icd(const Envelope& env, const WireMessage& msg) {
  IcdSlot& slot = icds_.at(env.to);
  IcdStep step = icd_handle(std::move(slot.state), std::move(slot.cfg), msg, now_,
                            proto_rng_, *prf_);
  slot.state = std::move(step.state);
  slot.cfg = std::move(step.cfg);
  std::string name(state_name(slot.state));
  note_state(env.to, name);
  std::string note = "state=" + name;
  append_note(note, step.note);
  for (const auto& m : step.out) send(env.to, slot.map, slot.cfg.wgie.icd_in, m);
  return note;
}

std::string Simulation::map_phase(const std::string& map, IcdIn subject) const {
  const MapState& st = maps_.at(map);
  auto it = st.records.find(subject);
  return it == st.records.end() ? "Unknown" : std::string(record_phase(it->second));
}

void Simulation::route_map_output(const std::string& map,
                                  const std::vector<Outbound>& out,
                                  std::string& note) {
  for (const auto& o : out) {
    switch (o.to) {
      case Peer::kWbrac:
        send(map, kWbracName, o.subject, o.msg);
        break;
      case Peer::kIcd: {
        const std::string target = icd_name(o.subject);
        auto it = icds_.find(target);
        if (it == icds_.end() || it->second.map != map) {
          append_note(note, "no-route:" + target);
          break;
        }
        send(map, target, o.subject, o.msg);
        break;
      }
      case Peer::kAllIcds:
        for (const auto& [name, slot] : icds_) {
          if (slot.map == map) send(map, name, slot.cfg.wgie.icd_in, o.msg);
        }
        break;
    }
  }
}

std::string Simulation::deliver_to_map(const Envelope& env, const WireMessage& msg) {
  const Peer from = env.from == kWbracName ? Peer::kWbrac : Peer::kIcd;
  IcdIn subject = env.subject;
  if (const auto* req = std::get_if<AuthRequest>(&msg); req && from == Peer::kIcd) {
    subject = req->icd_in;
  }
  MapState& st = maps_.at(env.to);
  MapStep step = map_handle(std::move(st), from, env.subject, msg, now_, *prf_);
  st = std::move(step.state);
  std::string phase = map_phase(env.to, subject);
  note_state(env.to, phase);
  std::string note = "state=" + phase;
  append_note(note, step.note);
  route_map_output(env.to, step.out, note);
  return note;
}

std::string Simulation::deliver_to_wbrac(const Envelope& env, const WireMessage& msg) {
  WbracStep step = wbrac_handle(registry_, wbrac_cfg_, env.subject, msg,
                                proto_rng_, *prf_);
  auto rec = registry_.find(env.subject);
  std::string state = rec ? (rec->pending_sd_new ? "Pending" : "Ready") : "Unknown";
  note_state(kWbracName, state);
  std::string note = "state=" + state;
  append_note(note, step.note);
  if (rec) {
    const std::string map = map_name(rec->wgie.esn);
    for (const auto& material : step.backhaul) {
      maps_.at(map) = map_stage_update(std::move(maps_.at(map)), material, now_);
      schedule_ticks(map);
    }
    for (const auto& o : step.out) send(kWbracName, map, o.subject, o.msg);
  }
  return note;
}

void Simulation::on_tick(const Tick& t) {
  ticks_scheduled_.erase({t.agent, now_.count()});
  if (auto it = icds_.find(t.agent); it != icds_.end()) {
    IcdSlot& slot = it->second;
    IcdStep step = icd_tick(std::move(slot.state), std::move(slot.cfg), now_);
    slot.state = std::move(step.state);
    slot.cfg = std::move(step.cfg);
    if (!step.note.empty()) {
      std::string name(state_name(slot.state));
      note_state(t.agent, name);
      record("clock", t.agent, "-", {}, "state=" + name + " " + step.note);
    }
    return;
  }
  MapState& st = maps_.at(t.agent);
  MapStep step = map_tick(std::move(st), now_);
  st = std::move(step.state);
  if (!step.note.empty()) {
    std::string note = step.note;
    record("clock", t.agent, "-", {}, note);
    route_map_output(t.agent, step.out, note);
  }
  schedule_ticks(t.agent);
}

void Simulation::on_timed(const TimedEvent& e) {
  std::visit(
      [&](const auto& what) {
        using T = std::decay_t<decltype(what)>;
        if constexpr (std::is_same_v<T, StartIcd>) {
          IcdSlot& slot = icds_.at(what.icd);
          if (!std::holds_alternative<IcdIdle>(slot.state)) {
            record("clock", what.icd, "-", {},
                   "state=" + std::string(state_name(slot.state)) + " start-ignored");
            return;
          }
          IcdStep step = icd_start(std::move(slot.state), std::move(slot.cfg), *prf_);
          slot.state = std::move(step.state);
          slot.cfg = std::move(step.cfg);
          note_state(what.icd, std::string(state_name(slot.state)));
          for (const auto& m : step.out) {
            send(what.icd, slot.map, slot.cfg.wgie.icd_in, m);
          }
        } else if constexpr (std::is_same_v<T, RotateMpc>) {
          try {
            RotateResult r = wbrac_rotate_mpc(registry_.schedule(), proto_rng_, now_);
            registry_.set_schedule(r.schedule);
            for (const auto& [name, st] : maps_) {
              send(kWbracName, name, IcdIn{0}, r.broadcast);
            }
          } catch (const Error& err) {
            if (err.code() != Errc::kTooEarly) throw;
            record("clock", kWbracName, "-", {}, "rotate-too-early");
          }
        } else if constexpr (std::is_same_v<T, ParamUpdate>) {
          IcdSlot& slot = icds_.at(what.icd);
          const IcdIn icd = slot.cfg.wgie.icd_in;
          registry_.update(icd, [](SubscriberRecord& r) { r.rmc = r.rmc.next(); });
          send(kWbracName, slot.map, icd, ParameterUpdateOrder{});
        } else {
          IcdSlot& slot = icds_.at(what.icd);
          slot.cfg.mpc = gen_mpc(proto_rng_);
          record("clock", what.icd, "-", {},
                 "state=" + std::string(state_name(slot.state)) + " desync-mpc");
        }
      },
      e.what);
}

void Simulation::on_replay(const FireReplay& r) {
  if (r.index >= captured_.size()) {
    record("adversary", "-", "-", {},
           "noop replay index=" + std::to_string(r.index));
    return;
  }
  schedule(now_, Deliver{captured_[r.index], false, Origin::kReplay});
}

void Simulation::inject(std::string from, std::string to, IcdIn subject,
                        Bytes frame, VirtualTime at) {
  if (!is_agent(to)) {
    throw Error(Errc::kScenarioError, "inject to unknown agent '" + to + "'");
  }
  schedule(at, Deliver{Envelope{std::move(from), std::move(to), subject, std::move(frame)},
                       false, Origin::kInject});
}

std::vector<std::string> Simulation::icd_names() const {
  std::vector<std::string> out;
  for (const auto& [name, slot] : icds_) out.push_back(name);
  return out;
}

const IcdState& Simulation::icd_state(const std::string& icd) const {
  auto it = icds_.find(icd);
  if (it == icds_.end()) throw Error(Errc::kScenarioError, "unknown ICD '" + icd + "'");
  return it->second.state;
}

const IcdConfig& Simulation::icd_config(const std::string& icd) const {
  auto it = icds_.find(icd);
  if (it == icds_.end()) throw Error(Errc::kScenarioError, "unknown ICD '" + icd + "'");
  return it->second.cfg;
}

const MapState& Simulation::map_state(const std::string& map) const {
  auto it = maps_.find(map);
  if (it == maps_.end()) throw Error(Errc::kScenarioError, "unknown MAP '" + map + "'");
  return it->second;
}

std::set<std::string> Simulation::states_reached(const std::string& agent) const {
  if (!is_agent(agent)) {
    throw Error(Errc::kScenarioError, "unknown agent '" + agent + "'");
  }
  auto it = reached_.find(agent);
  return it == reached_.end() ? std::set<std::string>{} : it->second;
}

std::string Simulation::state_of(const std::string& agent) const {
  if (auto it = icds_.find(agent); it != icds_.end()) {
    return std::string(state_name(it->second.state));
  }
  if (auto it = maps_.find(agent); it != maps_.end()) {
    std::string out;
    for (const auto& [icd, rec] : it->second.records) {
      if (!out.empty()) out += ',';
      out += icd_name(icd) + ":" + std::string(record_phase(rec));
    }
    return out;
  }
  if (agent == kWbracName) {
    for (const auto& rec : registry_.snapshot()) {
      if (rec.pending_sd_new) return "Pending";
    }
    return "Ready";
  }
  throw Error(Errc::kScenarioError, "unknown agent '" + agent + "'");
}

Trace sim_run(const Scenario& scenario, std::uint64_t seed, VirtualTime max_time) {
  Simulation sim(scenario, seed, max_time);
  return sim.run();
}

}  // namespace wgiot
