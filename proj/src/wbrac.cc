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

#include "wgiot/wbrac.hpp"

#include <fstream>
#include <mutex>
#include <sstream>

#include "text_util.hpp"

namespace wgiot {

Registry::Registry(const Registry& other) {
  std::shared_lock lock(other.mutex_);
  records_ = other.records_;
  schedule_ = other.schedule_;
}

Registry& Registry::operator=(const Registry& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_, other.mutex_);
  records_ = other.records_;
  schedule_ = other.schedule_;
  return *this;
}

void Registry::insert(SubscriberRecord record) {
  std::unique_lock lock(mutex_);
  IcdIn icd = record.icd_in();
  if (records_.contains(icd)) {
    throw Error(Errc::kDuplicateIcd,
                "ICD " + std::to_string(raw(icd)) + " already provisioned");
  }
  records_.emplace(icd, std::move(record));
}

std::optional<SubscriberRecord> Registry::find(IcdIn icd) const {
  std::shared_lock lock(mutex_);
  auto it = records_.find(icd);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void Registry::update(IcdIn icd,
                      const std::function<void(SubscriberRecord&)>& fn) {
  std::unique_lock lock(mutex_);
  auto it = records_.find(icd);
  if (it == records_.end()) {
    throw Error(Errc::kUnknownIcd,
                "ICD " + std::to_string(raw(icd)) + " not provisioned");
  }
  // Work on a copy so a throwing `fn` leaves the record untouched.
  SubscriberRecord copy = it->second;
  fn(copy);
  it->second = std::move(copy);
}

std::vector<SubscriberRecord> Registry::snapshot() const {
  std::shared_lock lock(mutex_);
  std::vector<SubscriberRecord> out;
  out.reserve(records_.size());
  for (const auto& [icd, rec] : records_) out.push_back(rec);
  return out;
}

std::size_t Registry::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

MpcSchedule Registry::schedule() const {
  std::shared_lock lock(mutex_);
  return schedule_;
}

void Registry::set_schedule(MpcSchedule schedule) {
  std::unique_lock lock(mutex_);
  schedule_ = std::move(schedule);
}

bool operator==(const Registry& a, const Registry& b) {
  return a.snapshot() == b.snapshot() && a.schedule() == b.schedule();
}

MapProvision map_material(const SubscriberRecord& rec, const SdPair& sd,
                          WbracId wbrac_id, std::size_t count, Rng& rng,
                          const PrfBackend& prf) {
  const Esn esn = rec.wgie.esn;
  const IcdIn icd = rec.wgie.icd_in;
  MapProvision p{icd, sd, authenticate_signature(sd, esn, icd, rec.sc_auth_k, prf),
                 rec.rmc, {}};
  p.vectors.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Wmap wmap = gen_wmap(rng);
    UniqueChallenge challenge = compose_unique_challenge(wmap, wbrac_id);
    p.vectors.push_back(
        {wmap, authorization_signature(sd, challenge, esn, icd, prf)});
  }
  return p;
}

ProvisionResult wbrac_provision(Registry& registry, const WgieRecord& wgie,
                                const ScAuthKey& k, Rng& rng, WbracId wbrac_id,
                                std::size_t vectors, const PrfBackend& prf) {
  if (registry.find(wgie.icd_in)) {
    throw Error(Errc::kDuplicateIcd, "ICD " + std::to_string(raw(wgie.icd_in)) +
                                         " already provisioned");
  }
  SubscriberRecord rec{wgie, k, gen_sd(rng), Rmc{0}, std::nullopt};
  registry.insert(rec);
  MapProvision material = map_material(rec, rec.sd, wbrac_id, vectors, rng, prf);
  return ProvisionResult{std::move(rec), std::move(material)};
}

RotateResult wbrac_rotate_mpc(MpcSchedule schedule, Rng& rng, VirtualTime now) {
  if (now < schedule.last_rotation + schedule.period) {
    throw Error(Errc::kTooEarly, "MPC rotation before period elapsed");
  }
  schedule.history.push_front({schedule.current, schedule.last_rotation, now});
  while (schedule.history.size() > schedule.history_capacity) {
    schedule.history.pop_back();
  }
  schedule.current = gen_mpc(rng);
  schedule.last_rotation = now;
  AccessParameterMessage broadcast{schedule.current};
  return RotateResult{std::move(schedule), broadcast};
}

BeginUpdateResult wbrac_begin_update(SubscriberRecord rec, Rng& rng,
                                     const PrfBackend& prf) {
  if (rec.pending_sd_new) {
    throw Error(Errc::kUpdateInProgress,
                "update already pending for ICD " + std::to_string(raw(rec.icd_in())));
  }
  UpdateRand rand = gen_update_rand(rng);
  rec.pending_sd_new = derive_update_sd(rand, rec.wgie.esn, rec.wgie.icd_in,
                                        rec.sc_auth_k, prf);
  UpdateMessage msg{rec.wgie.icd_in, rand};
  return BeginUpdateResult{std::move(rec), msg};
}

MapChallengeResponse wbrac_answer_challenge(const SubscriberRecord& rec,
                                            const ToMap& to_map,
                                            const PrfBackend& prf) {
  if (!rec.pending_sd_new) {
    throw Error(Errc::kNoPendingUpdate, "no pending update");
  }
  return MapChallengeResponse{authorization_signature(
      *rec.pending_sd_new, to_map.span(), rec.wgie.esn, rec.wgie.icd_in, prf)};
}

SubscriberRecord wbrac_commit(SubscriberRecord rec, UpdateOutcome outcome) {
  if (!rec.pending_sd_new) {
    throw Error(Errc::kNoPendingUpdate, "no pending update");
  }
  if (outcome == UpdateOutcome::kConfirmed) rec.sd = *rec.pending_sd_new;
  rec.pending_sd_new.reset();
  return rec;
}

WbracStep wbrac_handle(Registry& registry, const WbracConfig& config,
                       IcdIn subject, const WireMessage& msg, Rng& rng,
                       const PrfBackend& prf) {
  const Tag tag = tag_of(msg);
  auto rec = registry.find(subject);
  auto state_name = [&] {
    return std::string(rec && rec->pending_sd_new ? "Pending" : "Ready");
  };
  if (!rec) return WbracStep{{}, {}, Unexpected{"Unknown", tag}, "unknown-icd"};

  WbracStep step;
  if (std::holds_alternative<AuthRequest>(msg)) {
    if (rec->pending_sd_new) {
      step.note = "update-in-progress";
      return step;
    }
    BeginUpdateResult begun = wbrac_begin_update(*rec, rng, prf);
    registry.update(subject, [&](SubscriberRecord& r) { r = begun.record; });
    step.backhaul.push_back(map_material(begun.record, *begun.record.pending_sd_new,
                                         config.id, config.vectors_per_provision,
                                         rng, prf));
    step.out.push_back({Peer::kWbrac, subject, begun.message});
    step.note = "begin-update";
    return step;
  }
  if (const auto* fwd = std::get_if<MapChallengeForward>(&msg)) {
    if (!rec->pending_sd_new || fwd->icd_in != subject) {
      step.unexpected = Unexpected{state_name(), tag};
      step.note = "UnexpectedMessage";
      return step;
    }
    step.out.push_back({Peer::kWbrac, subject, wbrac_answer_challenge(*rec, fwd->to_map, prf)});
    step.note = "answer";
    return step;
  }
  const bool confirmed = std::holds_alternative<UpdateConfirmation>(msg);
  if (confirmed || std::holds_alternative<UpdateRejection>(msg)) {
    if (!rec->pending_sd_new) {
      step.unexpected = Unexpected{state_name(), tag};
      step.note = "UnexpectedMessage";
      return step;
    }
    registry.update(subject, [&](SubscriberRecord& r) {
      r = wbrac_commit(r, confirmed ? UpdateOutcome::kConfirmed
                                    : UpdateOutcome::kRejected);
    });
    step.note = confirmed ? "commit" : "rollback";
    return step;
  }
  step.unexpected = Unexpected{state_name(), tag};
  step.note = "UnexpectedMessage";
  return step;
}

std::string format_registry(const Registry& registry) {
  std::ostringstream out;
  out << "wgiot-registry v1\n";
  MpcSchedule s = registry.schedule();
  out << "mpc " << s.period.count() << ' ' << s.last_rotation.count() << ' '
      << s.current.hex();
  for (const auto& h : s.history) {
    out << ' ' << h.mpc.hex() << ' ' << h.valid_from.count() << ' '
        << h.valid_until.count();
  }
  out << '\n';
  for (const auto& rec : registry.snapshot()) {
    auto sd = rec.sd.bytes();
    out << raw(rec.wgie.icd_in) << ' ' << raw(rec.wgie.esn) << ' '
        << rec.wgie.key.hex() << ' ' << rec.sc_auth_k.hex() << ' '
        << to_hex(sd) << ' ' << rec.rmc.decimal() << '\n';
  }
  return out.str();
}

namespace {

std::int64_t parse_ms(std::string_view s, std::size_t line) {
  auto v = text::parse_u64(s);
  if (!v || *v > static_cast<std::uint64_t>(INT64_MAX)) {
    throw Error(Errc::kParseError,
                "line " + std::to_string(line) + ": bad time value", line);
  }
  return static_cast<std::int64_t>(*v);
}

template <typename T>
T parse_fixed(std::string_view s, std::size_t line) {
  try {
    return T::from_hex(s);
  } catch (const Error&) {
    throw Error(Errc::kParseError,
                "line " + std::to_string(line) + ": bad hex field", line);
  }
}

}  // namespace

SubscriberRecord parse_subscriber_line(std::string_view line, std::size_t line_no) {
  auto fail = [&](const std::string& why) {
    return Error(Errc::kParseError, "line " + std::to_string(line_no) + ": " + why,
                 line_no);
  };
  auto f = text::fields(line);
  if (f.size() != 6) throw fail("expected 6 fields");
  auto icd = text::parse_u64(f[0]);
  auto esn = text::parse_u64(f[1]);
  if (!icd || !esn) throw fail("bad icd_in/esn");
  SubscriberRecord rec;
  rec.wgie = WgieRecord{parse_fixed<WgieKey>(f[2], line_no), Esn{*esn}, IcdIn{*icd}};
  rec.sc_auth_k = parse_fixed<ScAuthKey>(f[3], line_no);
  try {
    rec.sd = SdPair::from_bytes(from_hex(f[4]));
  } catch (const Error&) {
    throw fail("bad hex field");
  }
  auto rmc = u128_from_decimal(f[5]);
  if (!rmc) throw fail("bad rmc");
  rec.rmc = Rmc{*rmc};
  return rec;
}

Registry parse_registry(std::string_view content) {
  Registry registry;
  std::size_t line_no = 0;
  bool header = false;
  for (std::string_view raw_line : text::lines(content)) {
    ++line_no;
    std::string_view line = text::trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "wgiot-registry v1") {
        throw Error(Errc::kParseError,
                    "line " + std::to_string(line_no) + ": missing header", line_no);
      }
      header = true;
      continue;
    }
    auto f = text::fields(line);
    if (f[0] == "mpc") {
      if (f.size() < 4 || (f.size() - 4) % 3 != 0) {
        throw Error(Errc::kParseError,
                    "line " + std::to_string(line_no) + ": bad mpc line", line_no);
      }
      MpcSchedule s;
      s.period = VirtualTime{parse_ms(f[1], line_no)};
      s.last_rotation = VirtualTime{parse_ms(f[2], line_no)};
      s.current = parse_fixed<Mpc>(f[3], line_no);
      for (std::size_t i = 4; i < f.size(); i += 3) {
        s.history.push_back({parse_fixed<Mpc>(f[i], line_no),
                             VirtualTime{parse_ms(f[i + 1], line_no)},
                             VirtualTime{parse_ms(f[i + 2], line_no)}});
      }
      registry.set_schedule(std::move(s));
      continue;
    }
    SubscriberRecord rec = parse_subscriber_line(line, line_no);
    try {
      registry.insert(std::move(rec));
    } catch (const Error& e) {
      throw Error(Errc::kParseError,
                  "line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
  }
  if (!header) throw Error(Errc::kParseError, "empty registry file", 1);
  return registry;
}

void registry_save(const Registry& registry, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::kIoFailure, "cannot open " + path.string() + " for writing");
  }
  out << format_registry(registry);
  if (!out.flush()) throw Error(Errc::kIoFailure, "write failed: " + path.string());
}

Registry registry_load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoFailure, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_registry(buf.str());
}

}  // namespace wgiot
