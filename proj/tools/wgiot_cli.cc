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

// wgiot: scenario runner and conformance-vector generator.
//
//   wgiot run <scenario> [--seed N] [--trace FILE] [--max-time MS]
//   wgiot vectors [--backend NAME] [--out FILE]
//
// Exit status: 0 success, 1 input or usage error, 2 failed expectation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wgiot/scenario.hpp"
#include "wgiot/sim.hpp"
#include "wgiot/vectors.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kAssertionFailed = 2;

bool write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << data;
  out.close();
  if (!out) {
    std::cerr << "wgiot: cannot write " << path << "\n";
    return false;
  }
  return true;
}

int cmd_run(const std::string& path, std::uint64_t seed,
            const std::string& trace_out, std::int64_t max_time) {
  wgiot::ScenarioFile file = wgiot::load_scenario(path);
  wgiot::Simulation sim(file.scenario, seed, wgiot::VirtualTime{max_time});
  const wgiot::Trace& trace = sim.run();
  if (!trace_out.empty() && !write_file(trace_out, wgiot::serialize_trace(trace))) {
    return kInputError;
  }
  int failed = 0;
  for (const auto& r : wgiot::evaluate(file, sim)) {
    std::cout << (r.passed ? "PASS" : "FAIL") << " line " << r.expectation->line
              << ": " << r.expectation->text;
    if (!r.passed && !r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << "\n";
    failed += r.passed ? 0 : 1;
  }
  std::cout << sim.trace().entries.size() << " trace lines, " << failed
            << " failed expectation(s)\n";
  return failed == 0 ? kOk : kAssertionFailed;
}

int cmd_vectors(const std::string& backend, const std::string& out) {
  auto prf = wgiot::make_backend(backend);
  std::string text = wgiot::format_vectors(wgiot::generate_vectors(*prf));
  if (out.empty() || out == "-") {
    std::cout << text;
    return kOk;
  }
  return write_file(out, text) ? kOk : kInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wg-iot protocol simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::uint64_t seed = 0;
  std::string trace_out;
  std::int64_t max_time = 60000;
  auto* run = app.add_subcommand("run", "run a scenario and check its expectations");
  run->add_option("scenario", scenario, "scenario file")->required();
  run->add_option("--seed", seed, "run seed");
  run->add_option("--trace", trace_out, "write the trace here");
  run->add_option("--max-time", max_time, "virtual time limit in ms")
      ->check(CLI::NonNegativeNumber);

  std::string backend = "hmac-sha256";
  std::string out;
  auto* vec = app.add_subcommand("vectors", "emit conformance vectors");
  vec->add_option("--backend", backend, "PRF backend");
  vec->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*run) return cmd_run(scenario, seed, trace_out, max_time);
    return cmd_vectors(backend, out);
  } catch (const wgiot::Error& e) {
    std::cerr << "wgiot: " << wgiot::errc_name(e.code()) << ": " << e.what() << "\n";
    return kInputError;
  }
}
