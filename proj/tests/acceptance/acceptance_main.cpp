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

// Acceptance suite: one PASS/FAIL line per criterion, exit 1 on any FAIL.
// Everything runs on the scripted backend; the default scenario unless a
// criterion says otherwise.

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cgot/engine.hpp"
#include "cgot/llm_backend.hpp"
#include "cgot/metrics.hpp"
#include "cgot/scenario.hpp"
#include "support/round_trip.hpp"
#include "cli.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cgot;

// Pinned tolerances.
constexpr std::int64_t kTokenTolerance = 0;  // the proxy is deterministic
constexpr int kMakespanSlack = 2;
constexpr int kMaxTurns = 50;
constexpr int kRoundTripCases = 1000;
constexpr std::uint32_t kRoundTripSeed = 7;
constexpr std::uint64_t kSeed = 7;
constexpr int kBlockedAt = 3;
constexpr int kUnblockedAt = 8;
constexpr int kQuietFrom = 4;  // no entry into the blocked building from here...
constexpr int kQuietTo = 8;    // ...through here, inclusive
const char* const kBlockedSite = "B2";

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("cgot_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_tool(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream cells_in(line);
    std::string cell;
    while (std::getline(cells_in, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::vector<json> jsonl(const fs::path& path) {
  std::vector<json> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

json default_doc() { return json::parse(default_scenario_document()); }

fs::path write_scenario(const std::string& name, json doc) {
  doc["name"] = name;
  const fs::path path = work_dir() / (name + ".json");
  std::ofstream(path) << doc.dump(1);
  return path;
}

json blocked_doc() {
  json doc = default_doc();
  doc["events"] = json::array({
      {{"kind", "BuildingBlocked"}, {"atTurn", kBlockedAt}, {"building", kBlockedSite}},
      {{"kind", "BuildingUnblocked"}, {"atTurn", kUnblockedAt}, {"building", kBlockedSite}},
  });
  return doc;
}

json disabled_doc() {
  json doc = default_doc();
  doc["events"] = json::array({
      {{"kind", "AgentDisabled"}, {"atTurn", 2}, {"agent", "RA"}},
      {{"kind", "AgentDisabled"}, {"atTurn", 3}, {"agent", "RB"}},
      {{"kind", "AgentEnabled"}, {"atTurn", 3}, {"agent", "RA"}},
      {{"kind", "AgentEnabled"}, {"atTurn", 5}, {"agent", "RB"}},
      {{"kind", "AgentDisabled"}, {"atTurn", 6}, {"agent", "V2"}},
      {{"kind", "AgentEnabled"}, {"atTurn", 7}, {"agent", "V2"}},
  });
  return doc;
}

struct LibraryRun {
  SystemState system;
  RunReport report;
};

LibraryRun library_run(const ScenarioConfig& scenario, Mode mode,
                       const std::function<void(const SystemState&)>& at_boundary = {}) {
  LibraryRun run{make_system(scenario, mode, kSeed), {}};
  ScriptedBackend backend(kSeed);
  if (at_boundary) at_boundary(run.system);
  while (!all_tasks_complete(run.system.env) && run.system.env.turn < kMaxTurns) {
    run_turn(run.system, backend);
    if (at_boundary) at_boundary(run.system);
  }
  run.report = make_report(run.system, kMaxTurns);
  return run;
}

std::uint64_t at(const std::vector<std::uint64_t>& v, std::size_t i) {
  return i < v.size() ? v[i] : 0;
}

// Default comparison shared by the first three criteria.
struct DefaultComparison {
  bool cli_ok = false;
  std::string cli_error;
  std::map<std::string, std::vector<std::uint64_t>> csvTokens;  // by mode label
  std::map<std::string, std::vector<std::uint64_t>> csvCum;
  std::vector<std::vector<std::string>> deltaRows;
  LibraryRun got;
  LibraryRun cgot;
  std::vector<bool> live;  // composition live during turn i+1, either mode
};

const DefaultComparison& default_comparison() {
  static const DefaultComparison cmp = [] {
    DefaultComparison c;
    const fs::path runs = work_dir() / "compare_runs.csv";
    const fs::path delta = work_dir() / "compare_delta.csv";
    const int code = run_tool({"compare", "--scenario", "default", "--seed", std::to_string(kSeed),
                          "--out", runs.string(), "--delta-out", delta.string()},
                         &c.cli_error);
    c.cli_ok = code == cli::kExitCompleted;
    for (const auto& row : csv_rows(slurp(runs))) {
      if (row.size() < 5) continue;
      c.csvTokens[row[1]].push_back(std::stoull(row[2]));
      c.csvCum[row[1]].push_back(std::stoull(row[3]));
    }
    c.deltaRows = csv_rows(slurp(delta));
    const ScenarioConfig scenario = load_scenario("default");
    c.got = library_run(scenario, Mode::GoT);
    c.cgot = library_run(scenario, Mode::CGoT);
    const std::size_t n = std::max(c.got.report.perTurnCompositionLive.size(),
                                   c.cgot.report.perTurnCompositionLive.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto flag = [i](const RunReport& r) {
        return i < r.perTurnCompositionLive.size() && r.perTurnCompositionLive[i];
      };
      c.live.push_back(flag(c.got.report) || flag(c.cgot.report));
    }
    return c;
  }();
  return cmp;
}

Check token_saving() {
  Check check;
  const auto& c = default_comparison();
  check.expect(c.cli_ok, "compare exited non-zero: " + c.cli_error);
  if (!check.ok) return check;
  const auto& got = c.csvTokens.at("got");
  const auto& cgot = c.csvTokens.at("cgot");
  check.expect(got == c.got.report.perTurnTokens, "GoT CSV disagrees with the library run");
  check.expect(cgot == c.cgot.report.perTurnTokens, "CGoT CSV disagrees with the library run");
  const std::uint64_t got_total = c.csvCum.at("got").back();
  const std::uint64_t cgot_total = c.csvCum.at("cgot").back();
  check.expect(cgot_total < got_total, "cumulative CGoT " + std::to_string(cgot_total) +
                                           " not below GoT " + std::to_string(got_total));
  int live_turns = 0;
  for (std::size_t i = 0; i < c.live.size(); ++i) {
    if (!c.live[i]) continue;
    ++live_turns;
    const auto a = static_cast<std::int64_t>(at(cgot, i));
    const auto b = static_cast<std::int64_t>(at(got, i));
    check.expect(a <= b + kTokenTolerance, "turn " + std::to_string(i + 1) + ": CGoT " +
                                               std::to_string(a) + " > GoT " + std::to_string(b));
  }
  check.expect(live_turns > 0, "no turn had a live composition");
  if (check.ok) {
    check.detail = "GoT " + std::to_string(got_total) + " vs CGoT " + std::to_string(cgot_total) +
                   " tokens; " + std::to_string(live_turns) + " live-composition turns";
  }
  return check;
}

Check widening_gap() {
  Check check;
  const auto& c = default_comparison();
  check.expect(c.cli_ok, "compare exited non-zero");
  if (!check.ok) return check;
  const auto& got = c.csvTokens.at("got");
  const auto& cgot = c.csvTokens.at("cgot");
  const std::size_t n = std::max(got.size(), cgot.size());
  check.expect(c.deltaRows.size() == n, "delta CSV has " + std::to_string(c.deltaRows.size()) +
                                            " rows, expected " + std::to_string(n));
  std::int64_t cum = 0;
  std::int64_t previous = 0;
  for (std::size_t i = 0; i < n && check.ok; ++i) {
    cum += static_cast<std::int64_t>(at(got, i)) - static_cast<std::int64_t>(at(cgot, i));
    const auto& row = c.deltaRows[i];
    check.expect(row.size() == 5 && std::stoll(row[4]) == cum,
                 "delta CSV turn " + std::to_string(i + 1) + " disagrees with recomputed delta");
    check.expect(cum >= previous, "cumulative delta fell at turn " + std::to_string(i + 1));
    if (i < c.live.size() && c.live[i]) {
      check.expect(cum > previous,
                   "cumulative delta flat on live turn " + std::to_string(i + 1));
    }
    previous = cum;
  }
  if (check.ok) check.detail = "final cumulative delta " + std::to_string(cum);
  return check;
}

Check comparable_planning() {
  Check check;
  const auto& c = default_comparison();
  const int got = c.got.report.makespanTurns;
  const int cgot = c.cgot.report.makespanTurns;
  check.expect(c.csvTokens.count("cgot") &&
                   static_cast<int>(c.csvTokens.at("cgot").size()) == cgot,
               "CSV row count disagrees with CGoT makespan");
  check.expect(cgot <= got + kMakespanSlack, "makespan CGoT " + std::to_string(cgot) +
                                                 " exceeds GoT " + std::to_string(got) + " + " +
                                                 std::to_string(kMakespanSlack));
  if (check.ok) {
    check.detail = "makespan GoT " + std::to_string(got) + ", CGoT " + std::to_string(cgot);
  }
  return check;
}

Check completion() {
  Check check;
  const auto& c = default_comparison();
  const ScenarioConfig scenario = load_scenario("default");
  int cleanings = 0, deliveries = 0;
  for (const auto& task : scenario.tasks) {
    (task.kind == TaskKind::Clean ? cleanings : deliveries)++;
  }
  check.expect(cleanings == 2 && deliveries == 2, "default scenario is not 2 cleanings + 2 deliveries");
  for (const auto* run : {&c.got, &c.cgot}) {
    const std::string label(to_string(run->report.mode));
    check.expect(run->report.completed, label + " did not complete");
    check.expect(run->report.makespanTurns <= kMaxTurns, label + " exceeded the turn cap");
    for (const auto& task : run->system.env.tasks) {
      check.expect(task.completed, label + " left a task open at " + task.target);
    }
    const auto& building = run->system.env.buildings;
    for (const auto& task : scenario.tasks) {
      if (task.kind != TaskKind::Deliver) continue;
      const auto& b = building.at(task.target);
      check.expect(b.deliveryStage1Done && b.deliveryStage2Done,
                   label + " left a delivery stage open at " + task.target);
    }
  }
  if (check.ok) {
    check.detail = "both modes done within " + std::to_string(kMaxTurns) + " turns";
  }
  return check;
}

Check round_trip() {
  Check check;
  const auto failures =
      cgot::testing::composition_round_trip_failures(kRoundTripCases, kRoundTripSeed);
  if (!failures.empty()) {
    check.fail(std::to_string(failures.size()) + " failing cases, first: " + failures.front());
  } else {
    check.detail = std::to_string(kRoundTripCases) + " cases, 0 failures";
  }
  return check;
}

Check determinism() {
  Check check;
  for (const std::string mode : {"got", "cgot"}) {
    std::string csv[2], state[2];
    for (int i = 0; i < 2; ++i) {
      const fs::path out = work_dir() / ("det_" + mode + std::to_string(i) + ".csv");
      const fs::path fin = work_dir() / ("det_" + mode + std::to_string(i) + ".json");
      std::string err;
      const int code = run_tool({"run", "--scenario", "default", "--mode", mode, "--seed",
                            std::to_string(kSeed), "--out", out.string(), "--final-state",
                            fin.string()},
                           &err);
      check.expect(code == cli::kExitCompleted, mode + " run exited " + std::to_string(code) + ": " + err);
      csv[i] = slurp(out);
      state[i] = slurp(fin);
    }
    check.expect(!csv[0].empty() && !state[0].empty(), mode + " produced empty output");
    check.expect(csv[0] == csv[1], mode + " CSV reports differ");
    check.expect(state[0] == state[1], mode + " final states differ");
  }
  if (check.ok) check.detail = "CSV and final state byte-identical across runs, both modes";
  return check;
}

Check graph_integrity() {
  Check check;
  int boundaries = 0, graphs_checked = 0, formed = 0, dissolved = 0;
  const auto inspect = [&](const std::string& label) {
    return [&, label](const SystemState& system) {
      ++boundaries;
      for (const auto& unit : inference_units(system)) {
        check.expect(system.graphs.contains(unit),
                     label + ": no graph for " + unit + " at turn " +
                         std::to_string(system.env.turn));
      }
      for (const auto& [owner, graph] : system.graphs) {
        ++graphs_checked;
        const auto violations = validate(graph);
        if (!violations.empty()) {
          check.fail(label + ": graph " + owner + " invalid at turn " +
                     std::to_string(system.env.turn) + ": " + violations.front().detail);
        }
      }
    };
  };
  // The default run only combines; the blocked variant also splits.
  const std::vector<std::pair<std::string, ScenarioConfig>> scenarios{
      {"default", load_scenario("default")},
      {"blocked", parse_scenario(blocked_doc())},
  };
  for (const auto& [name, scenario] : scenarios) {
    for (Mode mode : {Mode::GoT, Mode::CGoT}) {
      const auto run = library_run(scenario, mode, inspect(name + "/" + std::string(to_string(mode))));
      for (const auto& record : run.system.compositions) {
        ++formed;
        if (record.dissolvedAtTurn) ++dissolved;
      }
    }
  }
  check.expect(formed > 0 && dissolved > 0, "runs never crossed both a combine and a split");
  if (check.ok) {
    check.detail = std::to_string(graphs_checked) + " graph checks over " +
                   std::to_string(boundaries) + " turn boundaries (" + std::to_string(formed) +
                   " combines, " + std::to_string(dissolved) + " splits)";
  }
  return check;
}

Check emergency() {
  Check check;
  const fs::path scenario = write_scenario("blocked", blocked_doc());
  for (const std::string mode : {"got", "cgot"}) {
    const fs::path log = work_dir() / ("blocked_" + mode + ".jsonl");
    std::string err;
    const int code = run_tool({"run", "--scenario", scenario.string(), "--mode", mode, "--out",
                          (work_dir() / ("blocked_" + mode + ".csv")).string(), "--log",
                          log.string()},
                         &err);
    check.expect(code == cli::kExitCompleted, mode + " blocked run did not complete: " + err);
    bool saw_block = false, saw_unblock = false;
    for (const auto& turn : jsonl(log)) {
      const int t = turn.at("turn").get<int>();
      for (const auto& event : turn.at("eventsApplied")) {
        saw_block |= event.at("kind") == "BuildingBlocked" && t == kBlockedAt;
        saw_unblock |= event.at("kind") == "BuildingUnblocked" && t == kUnblockedAt;
      }
      if (t < kQuietFrom || t > kQuietTo) continue;
      for (const auto& arrival : turn.at("envDiff").at("arrivals")) {
        check.expect(arrival.at("site") != kBlockedSite,
                     mode + ": " + arrival.at("agent").get<std::string>() + " entered " +
                         kBlockedSite + " at turn " + std::to_string(t));
      }
      for (const auto& move : turn.at("envDiff").at("moves")) {
        check.expect(move.at("to") != kBlockedSite,
                     mode + ": " + move.at("agent").get<std::string>() + " moved into " +
                         kBlockedSite + " at turn " + std::to_string(t));
      }
    }
    check.expect(saw_block && saw_unblock, mode + ": block/unblock events missing from the log");
  }
  if (check.ok) {
    check.detail = "completed in both modes; nobody entered " + std::string(kBlockedSite) +
                   " in turns " + std::to_string(kQuietFrom) + "-" + std::to_string(kQuietTo);
  }
  return check;
}

// Who should infer on turn t, rebuilt from the scenario's event list and the
// composition history alone.
std::set<AgentId> expected_units(const ScenarioConfig& scenario, const SystemState& system,
                                 int turn) {
  std::set<AgentId> disabled;
  for (const auto& event : scenario.events) {
    if (event.atTurn >= turn) continue;  // applied during the execution of atTurn
    if (event.kind == EventKind::AgentDisabled) disabled.insert(event.agent);
    if (event.kind == EventKind::AgentEnabled) disabled.erase(event.agent);
  }
  std::set<AgentId> units;
  std::set<AgentId> absorbed;
  if (system.mode == Mode::CGoT) {
    for (const auto& record : system.compositions) {
      const bool live = record.formedAtTurn < turn &&
                        (!record.dissolvedAtTurn || *record.dissolvedAtTurn >= turn);
      if (!live) continue;
      absorbed.insert(record.members.begin(), record.members.end());
      const bool any_disabled = std::any_of(record.members.begin(), record.members.end(),
                                            [&](const AgentId& m) { return disabled.contains(m); });
      if (!any_disabled) units.insert(record.compositeId);
    }
  }
  for (const auto& entry : scenario.roster) {
    if (!absorbed.contains(entry.id) && !disabled.contains(entry.id)) units.insert(entry.id);
  }
  return units;
}

Check inference_accounting() {
  Check check;
  int turns_checked = 0;
  const std::vector<std::pair<std::string, ScenarioConfig>> scenarios{
      {"default", load_scenario("default")},
      {"disabled", parse_scenario(disabled_doc())},
  };
  for (const auto& [name, scenario] : scenarios) {
    for (Mode mode : {Mode::GoT, Mode::CGoT}) {
      const std::string label = name + "/" + std::string(to_string(mode));
      const auto run = library_run(scenario, mode);
      const SystemState& system = run.system;
      for (int t = 1; t <= system.env.turn; ++t) {
        ++turns_checked;
        const std::size_t rows = system.ledger.rows_for_turn(t);
        const auto expected = expected_units(scenario, system, t);
        const auto& log = system.log.at(static_cast<std::size_t>(t - 1));
        check.expect(rows == log.inferenceUnits.size(),
                     label + " turn " + std::to_string(t) + ": " + std::to_string(rows) +
                         " ledger rows for " + std::to_string(log.inferenceUnits.size()) +
                         " active units");
        std::set<AgentId> ledger_agents;
        for (const auto& row : system.ledger.rows()) {
          if (row.turn == t) ledger_agents.insert(row.agentId);
        }
        check.expect(ledger_agents == expected,
                     label + " turn " + std::to_string(t) + ": ledger agents differ from replay");
        if (mode == Mode::GoT) {
          std::size_t enabled_originals = 0;
          for (const auto& entry : scenario.roster) enabled_originals += expected.contains(entry.id);
          check.expect(rows == enabled_originals,
                       label + " turn " + std::to_string(t) + ": " + std::to_string(rows) +
                           " rows, roster has " + std::to_string(enabled_originals) + " enabled");
        }
      }
    }
  }
  if (check.ok) {
    check.detail = std::to_string(turns_checked) + " turns across default and agent-disabled runs";
  }
  return check;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"token saving", token_saving},
      {"widening gap", widening_gap},
      {"comparable planning", comparable_planning},
      {"completion", completion},
      {"composition round-trip", round_trip},
      {"determinism", determinism},
      {"graph integrity", graph_integrity},
      {"emergency handling", emergency},
      {"inference-call accounting", inference_accounting},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    try {
      check = criteria[i].second();
    } catch (const std::exception& e) {
      check.fail(std::string("threw: ") + e.what());
    }
    failed += !check.ok;
    std::cout << (check.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << " ("
              << criteria[i].first << "): " << check.detail << '\n';
  }
  std::error_code ignored;
  fs::remove_all(work_dir(), ignored);
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
