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

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/conformance.hpp"
#include "oracle/oracle.hpp"
#include "test_support.hpp"
#include "wgiot/scenario.hpp"
#include "wgiot/sim.hpp"
#include "wgiot/vectors.hpp"
#include "wgiot/wire.hpp"

namespace {

using namespace wgiot;
using ms = VirtualTime;
namespace fs = std::filesystem;

const fs::path kSource = WGIOT_SOURCE_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// AAC recomputed with the test-only oracle, independent of the library PRF.
Bytes oracle_aac(const SubscriberRecord& rec) {
  std::vector<std::uint8_t> msg{0x01};
  auto sd = rec.sd.bytes();
  msg.insert(msg.end(), sd.begin(), sd.end());
  for (std::uint64_t v : {raw(rec.wgie.esn), raw(rec.wgie.icd_in)}) {
    for (int i = 7; i >= 0; --i) msg.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  auto key = rec.sc_auth_k.bytes();
  oracle::Digest d = oracle::hmac_sha256({key.begin(), key.end()}, msg);
  return Bytes(d.begin(), d.begin() + 16);
}

// 1. Honest single-device run: exact reference frame sequence on every seed,
//    byte-identical to the shipped golden trace on seed 0.
Outcome honest_run() {
  ScenarioFile file = load_scenario(kSource / "scenarios/honest.scn");
  const SubscriberRecord& rec = file.scenario.subscribers.at(0);
  const Bytes want_aac = oracle_aac(rec);
  struct Line {
    long t;
    const char* from;
    const char* to;
    const char* tag;
    const char* note;
  };
  const std::vector<Line> reference = {
      {5, "icd-1", "map-100", "SecureActivation", "state=Idle activation"},
      {5, "icd-1", "map-100", "AuthRequest", "state=Authenticated accept"},
      {10, "map-100", "icd-1", "AuthAccept", "state=Authenticated authenticated"},
      {10, "-", "-", "END", "quiescent"}};
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Simulation sim(file.scenario, seed);
    const Trace& t = sim.run();
    bool good = t.entries.size() == reference.size();
    for (std::size_t i = 0; good && i < reference.size(); ++i) {
      const auto& e = t.entries[i];
      const auto& r = reference[i];
      good = e.time.count() == r.t && e.sender == r.from && e.receiver == r.to &&
             e.tag == r.tag && e.note == r.note;
    }
    if (good) {
      const Bytes& req = t.entries[1].payload;
      Guid g = decompose_guid(ByteSpan(req).subspan(16, 48));
      good = Bytes(g.aac.bytes().begin(), g.aac.bytes().end()) == want_aac &&
             g.mpc == sim.registry().schedule().current && g.rmc == rec.rmc;
    }
    if (seed == 0) {
      good = good && serialize_trace(t) == slurp(kSource / "scenarios/golden/honest_seed0.trace");
    }
    ok += good;
  }
  return {ok == 100, std::to_string(ok) + "/100 seeds"};
}

// 2. Update value after an MPC mismatch: both signature copies equal and
//    device and WBRAC agree on the new IoT_SD.
Outcome update_sync() {
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng shape(seed * 7919 + 1);
    Scenario s = testing::single_icd();
    s.events.clear();
    s.events.push_back({ms{0}, DesyncMpc{"icd-1"}});
    s.events.push_back({ms{1}, StartIcd{"icd-1"}});
    const ms radio{static_cast<long>(shape.next() % 50)};
    const ms up{static_cast<long>(shape.next() % 450)};
    const ms down{static_cast<long>(shape.next() % 450)};
    s.default_link.delay = radio;
    s.links[{"map-100", "wbrac"}] = LinkModel{up, {}, {}};
    s.links[{"wbrac", "map-100"}] = LinkModel{down, {}, {}};

    Simulation sim(s, seed);
    std::optional<AuthSignMap> device_sign;
    std::optional<AuthSignMap> wbrac_sign;
    while (sim.has_events()) {
      sim.step();
      if (const auto* w = std::get_if<IcdUpdateAwaitingConfirmation>(&sim.icd_state("icd-1"))) {
        device_sign = w->local_sign;
      }
    }
    for (const auto& e : sim.trace().entries) {
      if (e.tag == "MapChallengeResponse") wbrac_sign = AuthSignMap::from_span(e.payload);
    }
    const SdPair icd_sd = sim.icd_config("icd-1").sd;
    auto rec = sim.registry().find(IcdIn{1});
    const bool good = device_sign && wbrac_sign && *device_sign == *wbrac_sign &&
                      rec && !rec->pending_sd_new && rec->sd == icd_sd &&
                      icd_sd != s.subscribers[0].sd &&
                      sim.state_of("icd-1") == "Authenticated";
    ok += good;
  }
  return {ok == 1000, std::to_string(ok) + "/1000 seeds"};
}

// 3. Forgery resistance.
Outcome forgery() {
  // Full-width backend: random answers injected into a live challenge.
  ScenarioFile file = load_scenario(kSource / "scenarios/challenge.scn");
  int accepted_128 = 0;
  int challenged = 0;
  Rng adv(0xF0F0);
  for (int trial = 0; trial < 10000; ++trial) {
    Simulation sim(file.scenario, static_cast<std::uint64_t>(trial));
    AuthChallengeAnswer forged;
    for (auto& b : forged.sig.mutable_bytes()) b = static_cast<std::uint8_t>(adv.next());
    sim.inject("icd-1", "map-100", IcdIn{1}, encode(forged), ms{12});
    sim.run();
    for (const auto& e : sim.trace().entries) {
      if (e.note.find("injected") == std::string::npos) continue;
      ++challenged;
      if (e.note.find("challenge-pass") != std::string::npos) ++accepted_128;
    }
  }

  // 16-bit backend: the forger knows the width and guesses the 16 live bits.
  TruncatedPrf t16(16);
  SubscriberRecord rec = testing::subscriber();
  MapState base;
  base.config.esn = rec.wgie.esn;
  base = map_provision(base, map_material(rec, rec.sd, WbracId{0x57425241}, 0, adv, t16));
  const std::uint64_t trials = 2'000'000;
  std::uint64_t accepted_16 = 0;
  Rng r16(16);
  for (std::uint64_t i = 0; i < trials; ++i) {
    const Wmap wmap = gen_wmap(r16);
    const AuthSignMap expected = authorization_signature(
        rec.sd, compose_unique_challenge(wmap, WbracId{0x57425241}), rec.wgie.esn,
        rec.icd_in(), t16);
    MapState st = base;
    st.records.at(rec.icd_in()).outstanding_challenge = expected;
    AuthChallengeAnswer guess;
    const std::uint64_t g = r16.next();
    guess.sig.mutable_bytes()[0] = static_cast<std::uint8_t>(g >> 8);
    guess.sig.mutable_bytes()[1] = static_cast<std::uint8_t>(g);
    MapStep step = map_handle(std::move(st), Peer::kIcd, rec.icd_in(), guess, ms{0}, t16);
    for (const auto& o : step.out) accepted_16 += std::holds_alternative<AuthAccept>(o.msg);
  }
  const double rate = static_cast<double>(accepted_16) / static_cast<double>(trials);
  const double p = 1.0 / 65536.0;
  const bool pass = accepted_128 == 0 && challenged == 10000 && rate >= p * 0.5 && rate <= p * 2;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "128-bit: %d/%d accepted; 16-bit: %llu/%llu accepted, rate %.3e in [%.3e, %.3e]",
                accepted_128, challenged, static_cast<unsigned long long>(accepted_16),
                static_cast<unsigned long long>(trials), rate, p * 0.5, p * 2);
  return {pass, buf};
}

// 4. A captured AuthRequest replayed after a rotation (grace elapsed) always
//    lands in the mismatch branch.
Outcome replay() {
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Scenario s = testing::single_icd(ms{5});
    s.events.push_back({ms{1000}, RotateMpc{}});
    s.adversary.actions.push_back(CaptureMatching{Tag::kAuthRequest});
    const long when = 1000 + 5 + s.options.mpc_grace.count() + 1 + static_cast<long>(seed % 2000);
    s.adversary.actions.push_back(ReplayCaptured{0, ms{when}});
    Simulation sim(s, seed);
    sim.run();
    bool seen = false;
    bool good = true;
    for (const auto& e : sim.trace().entries) {
      if (e.note.find("replayed") == std::string::npos) continue;
      seen = true;
      good = good && e.note.find("mismatch{") != std::string::npos &&
             e.note.find(" accept") == std::string::npos &&
             (e.note.find("->update") != std::string::npos ||
              e.note.find("->challenge") != std::string::npos);
    }
    ok += seen && good;
  }
  return {ok == 500, std::to_string(ok) + "/500 seeds"};
}

// 5. Confirmation window: an answer arriving exactly 1000 ms after the ack
//    commits; 1001 ms leaves no UpdateConfirmation at all.
Outcome timer() {
  const std::vector<std::pair<long, long>> splits = {{500, 500}, {0, 1000}, {1000, 0}, {250, 750}, {999, 1}};
  int ok = 0;
  int total = 0;
  for (auto [up, down] : splits) {
    for (long extra : {0L, 1L}) {
      for (std::uint64_t seed : {0ull, 1ull, 2ull}) {
        Scenario s = testing::single_icd();
        s.events.clear();
        s.events.push_back({ms{0}, DesyncMpc{"icd-1"}});
        s.events.push_back({ms{1}, StartIcd{"icd-1"}});
        s.links[{"map-100", "wbrac"}] = LinkModel{ms{up}, {}, {}};
        s.links[{"wbrac", "map-100"}] = LinkModel{ms{down + extra}, {}, {}};
        Simulation sim(s, seed);
        sim.run();
        const std::size_t confirmations = frame_count(sim.trace(), Tag::kUpdateConfirmation);
        const bool committed = sim.icd_config("icd-1").sd != s.subscribers[0].sd;
        bool timed_out = false;
        for (const auto& e : sim.trace().entries) timed_out |= e.note.find("timeout") != std::string::npos;
        const bool good = extra == 0 ? (confirmations > 0 && committed && !timed_out)
                                     : (confirmations == 0 && !committed && timed_out);
        ++total;
        ok += good;
      }
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " boundary runs"};
}

// 6. Codec totality.
Outcome codec() {
  Rng rng(6);
  auto fill = [&](auto& fixed) {
    for (auto& b : fixed.mutable_bytes()) b = static_cast<std::uint8_t>(rng.next());
  };
  int roundtrip = 0;
  for (int i = 0; i < 100000; ++i) {
    WireMessage m;
    switch (rng.next() % 17) {
      case 0: m = SecureActivation{IcdIn{rng.next()}}; break;
      case 1: { AccessParameterMessage x; fill(x.mpc); m = x; break; }
      case 2: m = ParameterUpdateOrder{}; break;
      case 3: {
        AuthRequest x{IcdIn{rng.next()}, Esn{rng.next()}, {}};
        for (auto& b : x.guid) b = static_cast<std::uint8_t>(rng.next());
        m = x;
        break;
      }
      case 4: m = AuthAccept{}; break;
      case 5: { UpdateMessage x{IcdIn{rng.next()}, {}}; fill(x.rand); m = x; break; }
      case 6: { UpdateOrder x; fill(x.rand); m = x; break; }
      case 7: { MobileAccessChallengeOrder x; fill(x.to_map); m = x; break; }
      case 8: m = ChallengeAck{}; break;
      case 9: { MapChallengeForward x{IcdIn{rng.next()}, {}}; fill(x.to_map); m = x; break; }
      case 10: { MapChallengeResponse x; fill(x.sig); m = x; break; }
      case 11: { MapChallengeResponseOrder x; fill(x.sig); m = x; break; }
      case 12: m = UpdateRejection{}; break;
      case 13: m = UpdateConfirmation{}; break;
      case 14: { AuthenticationChallenge x; fill(x.wmap); m = x; break; }
      case 15: { AuthChallengeAnswer x; fill(x.sig); m = x; break; }
      default: m = AccessDenied{static_cast<DenyReason>(rng.next() & 0xff)}; break;
    }
    roundtrip += decode(encode(m)) == m;
  }
  int total = 0;
  int decoded = 0;
  for (int i = 0; i < 100000; ++i) {
    Bytes junk(static_cast<std::size_t>(rng.next() % 4097));
    for (auto& b : junk) b = static_cast<std::uint8_t>(rng.next());
    // Half the inputs get a plausible header so deeper checks are reached.
    if (i % 2 == 0 && junk.size() >= 3) {
      junk[0] = static_cast<std::uint8_t>(1 + rng.next() % 17);
      const std::size_t want = payload_size(*tag_from_byte(junk[0]));
      const std::size_t len = rng.next() % 4 == 0 ? junk.size() - 3 : want;
      junk[1] = static_cast<std::uint8_t>(len >> 8);
      junk[2] = static_cast<std::uint8_t>(len);
      if (rng.next() % 2 == 0) junk.resize(3 + want);
    }
    try {
      WireMessage m = decode(junk);
      decoded += encode(m) == junk;
      ++total;
    } catch (const Error&) {
      ++total;
    }
  }
  const bool pass = roundtrip == 100000 && total == 100000;
  return {pass, std::to_string(roundtrip) + "/100000 round trips, " + std::to_string(total) +
                    "/100000 arbitrary inputs handled (" + std::to_string(decoded) + " valid)"};
}

std::string run_cli(const std::string& exe, const fs::path& scn, std::uint64_t seed,
                    const fs::path& out) {
  const std::string cmd = exe + " run " + scn.string() + " --seed " + std::to_string(seed) +
                          " --trace " + out.string() + " >/dev/null 2>&1";
  if (std::system(cmd.c_str()) == -1) return {};
  return slurp(out);
}

// 7. Determinism across runs and across the -O2 and -O0 builds.
Outcome determinism() {
  const fs::path tmp = fs::temp_directory_path() / "wgiot_acceptance";
  fs::create_directories(tmp);
  int compared = 0;
  int same = 0;
  for (const auto& entry : fs::directory_iterator(kSource / "scenarios")) {
    if (entry.path().extension() != ".scn") continue;
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
      ScenarioFile f = load_scenario(entry.path());
      const std::string a = serialize_trace(sim_run(f.scenario, seed));
      const std::string b = serialize_trace(sim_run(f.scenario, seed));
      const std::string c = run_cli(WGIOT_CLI_PATH, entry.path(), seed, tmp / "o2.trace");
      const std::string d = run_cli(WGIOT_CLI_O0_PATH, entry.path(), seed, tmp / "o0.trace");
      ++compared;
      same += !a.empty() && a == b && a == c && c == d;
    }
  }
  fs::remove_all(tmp);
  return {compared > 0 && same == compared,
          std::to_string(same) + "/" + std::to_string(compared) + " (scenario, seed) pairs identical"};
}

// 8. Shipped vectors against the independent oracle, plus the frozen values.
Outcome conformance() {
  VectorFile file = parse_vectors(slurp(kSource / "vectors/reference.txt"));
  std::vector<std::string> bad = oracle::check_vectors(file);
  auto has = [&](const char* out_hex) {
    for (const auto& v : file.prf) if (to_hex(v.output) == out_hex) return true;
    return false;
  };
  auto seed_is = [&](const char* kind, const char* out_hex) {
    for (const auto& s : file.seeds) if (s.kind == kind && s.seed == 42) return to_hex(s.output) == out_hex;
    return false;
  };
  const bool frozen =
      has("239a7d0d3f1bbe3a98aede01e2ad818c2db60b7177c02e2f015035b2b5b7dbca") &&
      has("3451a969c887422793368e70940be29d1b0264a2ad6ed857781d590d0e13e730") &&
      has("0a3e173c4cc65db9827ae10ad40ac77097524e871956588009f32e00404118d7") &&
      has("828b43dbcf0a839bfdc20457d99e152402bd9a166081f6ea72290cb4d17e5499") &&
      seed_is("to_map", "c151df7d6ee5e2d6a3978fb9b92502a8c08c967f0e5e7b0a22e2c43f8a1ad34e") &&
      seed_is("wmap", "c151df7d6ee5e2d6") &&
      seed_is("update_rand", "c151df7d6ee5e2d6a3978fb9b92502a8");
  const std::size_t lines = file.prf.size() + file.seeds.size();
  return {bad.empty() && frozen && lines > 0,
          std::to_string(lines - bad.size()) + "/" + std::to_string(lines) +
              " lines match the oracle, frozen values " + (frozen ? "present" : "MISSING")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 honest-run", honest_run},   {"2 update-sync", update_sync},
      {"3 forgery", forgery},         {"4 replay", replay},
      {"5 timer", timer},             {"6 codec", codec},
      {"7 determinism", determinism}, {"8 conformance", conformance},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %-14s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(),
                o.detail.c_str(), secs);
    failed += !o.pass;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
