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

// Drives the installed wgiot executable and checks exit codes and files.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

namespace {

namespace fs = std::filesystem;

const std::string kCli = WGIOT_CLI_PATH;
const std::string kScenarios = WGIOT_SOURCE_DIR "/scenarios";

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("wgiot_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

TEST_F(CliTest, HonestScenarioExitsZero) {
  EXPECT_EQ(run("run " + kScenarios + "/honest.scn"), 0);
}

TEST_F(CliTest, PlantedFailureExitsTwoAndStillWritesTrace) {
  fs::path scn = write("planted.scn", std::string("[registry]\n") + wgiot::testing::kRegistryLine +
                                          "\n[events]\nstart icd-1 at 0\n"
                                          "[expect]\nfrme-count AuthAccept == 2\n");
  EXPECT_EQ(run("run " + scn.string()), 1);  // typo in the keyword: parse error
  scn = write("planted.scn", std::string("[registry]\n") + wgiot::testing::kRegistryLine +
                                 "\n[events]\nstart icd-1 at 0\n"
                                 "[expect]\nframe-count AuthAccept == 2\n");
  const fs::path trace = dir_ / "out.trace";
  EXPECT_EQ(run("run " + scn.string() + " --seed 4 --trace " + trace.string()), 2);
  const std::string text = slurp(trace);
  EXPECT_EQ(text.rfind("#wgiot-trace v1 backend=hmac-sha256 seed=4\n", 0), 0u);
  EXPECT_NE(text.find("\tAuthAccept\t"), std::string::npos);
}

TEST_F(CliTest, ScenarioErrorsExitOne) {
  EXPECT_EQ(run("run " + (dir_ / "missing.scn").string()), 1);
  fs::path scn = write("bad.scn", "[events]\nstart icd-4 at 0\n");
  EXPECT_EQ(run("run " + scn.string()), 1);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("run"), 1);
  EXPECT_EQ(run("run x.scn --seed nope"), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("run --help"), 0);
}

TEST_F(CliTest, SameSeedSameTraceFile) {
  const fs::path a = dir_ / "a.trace", b = dir_ / "b.trace";
  ASSERT_EQ(run("run " + kScenarios + "/update.scn --seed 11 --trace " + a.string()), 0);
  ASSERT_EQ(run("run " + kScenarios + "/update.scn --seed 11 --trace " + b.string()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
}

TEST_F(CliTest, MaxTimeFlag) {
  const fs::path t = dir_ / "t.trace";
  EXPECT_EQ(run("run " + kScenarios + "/timer.scn --max-time 600 --trace " + t.string()), 2);
  const std::string text = slurp(t);
  EXPECT_NE(text.find("\tEND\t-\tmax-time\n"), std::string::npos);
}

TEST_F(CliTest, VectorsCommand) {
  const fs::path out = dir_ / "v.txt";
  EXPECT_EQ(run("vectors --out " + out.string()), 0);
  EXPECT_EQ(slurp(out), slurp(WGIOT_SOURCE_DIR "/vectors/reference.txt"));
  EXPECT_EQ(run("vectors --backend hmac-sha256-trunc16 --out " + out.string()), 0);
  EXPECT_EQ(slurp(out), slurp(WGIOT_SOURCE_DIR "/vectors/trunc16.txt"));
  EXPECT_EQ(run("vectors --backend sha1"), 1);
  EXPECT_EQ(run("vectors --out /nonexistent-dir/v.txt"), 1);
}

}  // namespace
