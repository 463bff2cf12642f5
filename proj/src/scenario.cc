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

#include "wgiot/scenario.hpp"

#include <fstream>
#include <sstream>

#include "text_util.hpp"

namespace wgiot {

namespace {

using text::fields;

class Parser {
 public:
  Parser(std::string_view text, std::filesystem::path base)
      : text_(text), base_(std::move(base)) {}

  ScenarioFile run();

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::kParseError,
                "line " + std::to_string(line_) + ": " + msg, line_);
  }

  std::uint64_t number(std::string_view s) const {
    auto v = text::parse_u64(s);
    if (!v) fail("expected a number, got '" + std::string(s) + "'");
    return *v;
  }
  VirtualTime millis(std::string_view s) const {
    return VirtualTime{static_cast<std::int64_t>(number(s))};
  }
  Tag tag(std::string_view s) const {
    auto t = tag_from_name(s);
    if (!t) fail("unknown frame '" + std::string(s) + "'");
    return *t;
  }
  Remedy remedy(std::string_view s) const {
    for (Remedy r : {Remedy::kUniqueChallenge, Remedy::kUpdateValue, Remedy::kDeny}) {
      if (remedy_name(r) == s) return r;
    }
    fail("unknown remedy '" + std::string(s) + "'");
  }
  Probability probability(std::string_view s) const {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) fail("probability must be A/B");
    Probability p{number(s.substr(0, slash)), number(s.substr(slash + 1))};
    if (p.den == 0 || p.num > p.den) fail("probability out of range");
    return p;
  }
  // "... at T" suffix; returns T and strips it.
  VirtualTime at_suffix(std::vector<std::string_view>& f) const {
    if (f.size() < 2 || f[f.size() - 2] != "at") fail("missing 'at <ms>'");
    VirtualTime t = millis(f.back());
    f.resize(f.size() - 2);
    return t;
  }

  void registry_line(std::string_view line);
  void network_line(const std::vector<std::string_view>& f);
  void links_line(const std::vector<std::string_view>& f);
  void events_line(std::vector<std::string_view> f);
  void adversary_line(std::vector<std::string_view> f);
  void expect_line(const std::vector<std::string_view>& f, std::string_view raw);

  std::string_view text_;
  std::filesystem::path base_;
  std::size_t line_ = 0;
  ScenarioFile out_;
};

ScenarioFile Parser::run() {
  std::string section;
  for (std::string_view raw : text::lines(text_)) {
    ++line_;
    std::string_view line = raw.substr(0, raw.find('#'));
    line = text::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header");
      section = std::string(line.substr(1, line.size() - 2));
      if (section != "registry" && section != "network" && section != "links" &&
          section != "events" && section != "adversary" && section != "expect") {
        fail("unknown section [" + section + "]");
      }
      continue;
    }
    auto f = fields(line);
    if (section.empty()) fail("content outside a section");
    if (section == "registry") registry_line(line);
    else if (section == "network") network_line(f);
    else if (section == "links") links_line(f);
    else if (section == "events") events_line(std::move(f));
    else if (section == "adversary") adversary_line(std::move(f));
    else expect_line(f, line);
  }
  return std::move(out_);
}

void Parser::registry_line(std::string_view line) {
  try {
    out_.scenario.subscribers.push_back(parse_subscriber_line(line, line_));
  } catch (const Error& e) {
    fail(e.what());
  }
}

void Parser::network_line(const std::vector<std::string_view>& f) {
  NetworkOptions& o = out_.scenario.options;
  const std::string_view key = f[0];
  if (key == "policy") {
    if (f.size() != 3) fail("policy takes FIELDS REMEDY");
    MismatchSet set;
    std::string_view list = f[1];
    while (!list.empty()) {
      auto plus = list.find('+');
      std::string_view name = list.substr(0, plus);
      if (name == "AAC") set.add(Field::kAac);
      else if (name == "MPC") set.add(Field::kMpc);
      else if (name == "RMC") set.add(Field::kRmc);
      else fail("unknown field '" + std::string(name) + "'");
      list = plus == std::string_view::npos ? std::string_view{} : list.substr(plus + 1);
    }
    if (set.empty()) fail("empty field set");
    o.policy.by_mismatch[set.bits()] = remedy(f[2]);
    return;
  }
  if (f.size() != 2) fail("'" + std::string(key) + "' takes one value");
  const std::string_view v = f[1];
  if (key == "wbrac-id") {
    o.wbrac_id = WbracId{number(v)};
  } else if (key == "mpc-period") {
    o.mpc_period = millis(v);
  } else if (key == "mpc-grace") {
    o.mpc_grace = millis(v);
  } else if (key == "pending-ttl") {
    o.pending_ttl = millis(v);
  } else if (key == "vectors") {
    o.vectors_per_provision = number(v);
  } else if (key == "backend") {
    o.backend = std::string(v);
  } else if (key == "challenge-failure") {
    o.policy.on_challenge_failure = remedy(v);
  } else {
    fail("unknown network key '" + std::string(key) + "'");
  }
}

void Parser::links_line(const std::vector<std::string_view>& f) {
  LinkModel model;
  std::size_t i;
  LinkModel* target;
  if (f[0] == "default") {
    target = &out_.scenario.default_link;
    i = 1;
  } else {
    if (f.size() < 3 || f[1] != "->") fail("expected '<from> -> <to>'");
    target = &out_.scenario.links[{std::string(f[0]), std::string(f[2])}];
    i = 3;
  }
  for (; i < f.size(); ++i) {
    auto eq = f[i].find('=');
    if (eq == std::string_view::npos) fail("expected key=value");
    std::string_view k = f[i].substr(0, eq);
    std::string_view v = f[i].substr(eq + 1);
    if (k == "delay") model.delay = millis(v);
    else if (k == "drop") model.drop = probability(v);
    else if (k == "dup") model.dup = probability(v);
    else fail("unknown link key '" + std::string(k) + "'");
  }
  *target = model;
}

void Parser::events_line(std::vector<std::string_view> f) {
  TimedEvent ev;
  ev.at = at_suffix(f);
  if (f.size() == 1 && f[0] == "rotate") {
    ev.what = RotateMpc{};
  } else if (f.size() == 2 && f[0] == "start") {
    ev.what = StartIcd{std::string(f[1])};
  } else if (f.size() == 2 && f[0] == "param-update") {
    ev.what = ParamUpdate{std::string(f[1])};
  } else if (f.size() == 2 && f[0] == "desync-mpc") {
    ev.what = DesyncMpc{std::string(f[1])};
  } else {
    fail("unknown event");
  }
  out_.scenario.events.push_back(std::move(ev));
}

void Parser::adversary_line(std::vector<std::string_view> f) {
  auto& actions = out_.scenario.adversary.actions;
  if (f[0] == "capture" && f.size() == 2) {
    actions.push_back(CaptureMatching{tag(f[1])});
  } else if (f[0] == "corrupt" && f.size() == 4 && f[2] == "bit") {
    actions.push_back(CorruptBit{tag(f[1]), number(f[3])});
  } else if (f[0] == "replay") {
    VirtualTime at = at_suffix(f);
    if (f.size() != 2) fail("replay takes <index> at <ms>");
    actions.push_back(ReplayCaptured{number(f[1]), at});
  } else if (f[0] == "inject") {
    Inject inj;
    inj.at = at_suffix(f);
    if (f.size() == 8 && f[6] == "subject") {
      inj.subject = IcdIn{number(f[7])};
      f.resize(6);
    }
    if (f.size() != 6 || f[2] != "from" || f[4] != "to") {
      fail("inject takes <hex> from <agent> to <agent> [subject N] at <ms>");
    }
    try {
      inj.frame = from_hex(f[1]);
    } catch (const Error& e) {
      fail(e.what());
    }
    inj.from = std::string(f[3]);
    inj.to = std::string(f[5]);
    actions.push_back(std::move(inj));
  } else {
    fail("unknown adversary action");
  }
}

void Parser::expect_line(const std::vector<std::string_view>& f,
                         std::string_view raw) {
  Expectation e;
  e.line = line_;
  e.text = std::string(raw);
  if (f.size() == 3 && f[1] == "reaches") {
    e.what = ExpectReaches{std::string(f[0]), std::string(f[2])};
  } else if (f.size() == 3 && f[1] == "ends-in") {
    e.what = ExpectEndsIn{std::string(f[0]), std::string(f[2])};
  } else if (f.size() == 4 && f[0] == "frame-count") {
    static constexpr std::string_view kOps[] = {"==", "!=", "<", "<=", ">", ">="};
    bool ok = false;
    for (auto op : kOps) ok = ok || op == f[2];
    if (!ok) fail("unknown comparison '" + std::string(f[2]) + "'");
    e.what = ExpectFrameCount{tag(f[1]), std::string(f[2]), number(f[3])};
  } else if (f.size() == 2 && f[0] == "trace-golden") {
    e.what = ExpectTraceGolden{base_ / std::string(f[1])};
  } else if (f.size() == 2 && f[0] == "sd-synced") {
    e.what = ExpectSdSynced{std::string(f[1])};
  } else if (f.size() == 2 && f[0] == "session-agreed") {
    e.what = ExpectSessionAgreed{std::string(f[1])};
  } else {
    fail("unknown expectation");
  }
  out_.expectations.push_back(std::move(e));
}

bool compare(std::size_t a, const std::string& op, std::size_t b) {
  if (op == "==") return a == b;
  if (op == "!=") return a != b;
  if (op == "<") return a < b;
  if (op == "<=") return a <= b;
  if (op == ">") return a > b;
  return a >= b;
}

std::optional<IcdIn> icd_of(const Simulation& sim, const std::string& name) {
  for (const auto& n : sim.icd_names()) {
    if (n == name) return sim.icd_config(n).wgie.icd_in;
  }
  return std::nullopt;
}

ExpectResult check(const Expectation& e, const Simulation& sim) {
  ExpectResult r{&e, false, {}};
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ExpectReaches>) {
          auto seen = sim.states_reached(x.agent);
          r.passed = seen.contains(x.state);
          if (!r.passed) {
            r.detail = "observed:";
            for (const auto& s : seen) r.detail += " " + s;
          }
        } else if constexpr (std::is_same_v<T, ExpectEndsIn>) {
          std::string s = sim.state_of(x.agent);
          r.passed = s == x.state;
          if (!r.passed) r.detail = "final state " + s;
        } else if constexpr (std::is_same_v<T, ExpectFrameCount>) {
          std::size_t n = frame_count(sim.trace(), x.tag);
          r.passed = compare(n, x.op, x.count);
          if (!r.passed) r.detail = "count " + std::to_string(n);
        } else if constexpr (std::is_same_v<T, ExpectTraceGolden>) {
          std::ifstream in(x.path, std::ios::binary);
          if (!in) {
            r.detail = "cannot read " + x.path.string();
            return;
          }
          std::ostringstream buf;
          buf << in.rdbuf();
          r.passed = buf.str() == serialize_trace(sim.trace());
          if (!r.passed) r.detail = "trace differs from " + x.path.string();
        } else if constexpr (std::is_same_v<T, ExpectSdSynced>) {
          auto icd = icd_of(sim, x.icd);
          if (!icd) {
            r.detail = "unknown ICD";
            return;
          }
          auto rec = sim.registry().find(*icd);
          r.passed = rec && !rec->pending_sd_new && rec->sd == sim.icd_config(x.icd).sd;
          if (!r.passed) r.detail = "device and registry IoT_SD differ";
        } else {
          auto icd = icd_of(sim, x.icd);
          if (!icd) {
            r.detail = "unknown ICD";
            return;
          }
          const auto* auth = std::get_if<IcdAuthenticated>(&sim.icd_state(x.icd));
          const auto& cfg = sim.icd_config(x.icd);
          const MapState& map = sim.map_state(map_name(cfg.wgie.esn));
          auto it = map.records.find(*icd);
          r.passed = auth != nullptr && it != map.records.end() &&
                     it->second.session && *it->second.session == auth->session;
          if (!r.passed) r.detail = "no agreed session key";
        }
      },
      e.what);
  return r;
}

}  // namespace

ScenarioFile parse_scenario(std::string_view text,
                            const std::filesystem::path& base_dir) {
  return Parser(text, base_dir).run();
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path());
}

std::size_t frame_count(const Trace& trace, Tag tag) {
  const std::string_view name = tag_name(tag);
  std::size_t n = 0;
  for (const auto& e : trace.entries) {
    if (e.tag == name && e.note != "dropped") ++n;
  }
  return n;
}

std::vector<ExpectResult> evaluate(const ScenarioFile& file,
                                   const Simulation& sim) {
  std::vector<ExpectResult> out;
  for (const auto& e : file.expectations) {
    try {
      out.push_back(check(e, sim));
    } catch (const Error& err) {
      out.push_back(ExpectResult{&e, false, err.what()});
    }
  }
  return out;
}

}  // namespace wgiot
