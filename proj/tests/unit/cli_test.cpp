// Copyright 2026 The CGoT Authors
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

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace cgot::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string temp(const std::string& name) { return ::testing::TempDir() + "cgot_cli_" + name; }

TEST(Cli, RunDefaultCompletes) {
  const Result r = cli({"run", "--scenario", "default", "--mode", "cgot", "--backend", "scripted", "--seed", "7"});
  EXPECT_EQ(r.code, kExitCompleted) << r.err;
  EXPECT_EQ(r.out.rfind("turn,mode,tokens_turn,tokens_cum,active_agents\n", 0), 0u);
  EXPECT_NE(r.out.find("\n8,cgot,"), std::string::npos);
}

TEST(Cli, CompareEmitsBothModes) {
  const std::string delta = temp("delta.csv");
  const Result r = cli({"compare", "--scenario", "default", "--seed", "7", "--delta-out", delta});
  EXPECT_EQ(r.code, kExitCompleted) << r.err;
  EXPECT_NE(r.out.find(",got,"), std::string::npos);
  EXPECT_NE(r.out.find(",cgot,"), std::string::npos);
  EXPECT_NE(r.out.find("cumulative delta (got - cgot)"), std::string::npos);
  EXPECT_EQ(slurp(delta).rfind("turn,tokens_got,tokens_cgot,delta,cum_delta\n", 0), 0u);
  std::remove(delta.c_str());
}

TEST(Cli, MissingScenarioIsAnError) {
  const Result r = cli({"run", "--scenario", "missing.cfg"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("NotFound"), std::string::npos);
}

TEST(Cli, UnknownFlagPrintsUsage) {
  const Result r = cli({"run", "--frobnicate"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("run"), std::string::npos);
  EXPECT_EQ(cli({}).code, kExitError);
  EXPECT_EQ(cli({"run", "--mode", "hybrid"}).code, kExitError);
  EXPECT_EQ(cli({"serve"}).code, kExitError);  // --port is required
  EXPECT_EQ(cli({"--help"}).code, kExitCompleted);
}

TEST(Cli, IncompleteRunExitsTwo) {
  const std::string path = temp("short.json");
  std::ofstream(path) << R"({"sites": ["PackageSite", "B1"],
    "roster": [{"id": "RB", "kind": "RobotB", "location": "PackageSite"}],
    "tasks": [{"kind": "Clean", "target": "B1"}], "maxTurns": 2})";
  EXPECT_EQ(cli({"run", "--scenario", path}).code, kExitIncomplete);
  std::remove(path.c_str());
}

TEST(Cli, RunsAreByteIdentical) {
  std::string first_csv, first_state, first_log;
  for (int i = 0; i < 2; ++i) {
    const std::string csv = temp("r" + std::to_string(i) + ".csv");
    const std::string state = temp("s" + std::to_string(i) + ".json");
    const std::string log = temp("l" + std::to_string(i) + ".jsonl");
    const Result r = cli({"run", "--mode", "got", "--seed", "7", "--out", csv, "--final-state", state, "--log", log});
    ASSERT_EQ(r.code, kExitCompleted) << r.err;
    if (i == 0) {
      first_csv = slurp(csv);
      first_state = slurp(state);
      first_log = slurp(log);
      EXPECT_FALSE(first_csv.empty());
      EXPECT_EQ(std::count(first_log.begin(), first_log.end(), '\n'), 8);
    } else {
      EXPECT_EQ(slurp(csv), first_csv);
      EXPECT_EQ(slurp(state), first_state);
      EXPECT_EQ(slurp(log), first_log);
    }
    for (const auto& p : {csv, state, log}) std::remove(p.c_str());
  }
}

TEST(Cli, UnwritableOutputIsAnError) {
  EXPECT_EQ(cli({"run", "--out", "/nonexistent-dir/x.csv"}).code, kExitError);
}

}  // namespace
}  // namespace cgot::cli
