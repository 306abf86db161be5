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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "cgot/control_plane.hpp"
#include "cgot/error.hpp"
#include "cgot/http_backend.hpp"
#include "cgot/scenario.hpp"
#include "cgot/serialize.hpp"

namespace cgot::cli {
namespace {

struct Common {
  std::string scenario = "default";
  std::string mode = "cgot";
  std::string backend = "scripted";
  std::optional<std::uint64_t> seed;
  bool concurrent = false;
};

std::unique_ptr<InferenceBackend> make_backend(const std::string& kind, std::uint64_t seed) {
  if (kind == "scripted") return std::make_unique<ScriptedBackend>(seed);
  if (kind == "http") return std::make_unique<HttpBackend>(HttpBackendConfig::from_env());
  throw Error(ErrorCode::InvalidInput, "unknown backend " + kind);
}

Mode mode_of(const std::string& text) {
  const auto mode = parse_mode(text);
  if (!mode) throw Error(ErrorCode::InvalidInput, "unknown mode " + text);
  return *mode;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::InvalidInput, "cannot open " + path + " for writing");
  file << text;
  if (!file) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
}

std::string log_lines(const SystemState& system) {
  std::string text;
  for (const auto& log : system.log) text += to_json(log).dump() + "\n";
  return text;
}

struct RunArgs {
  Common common;
  std::string out;
  std::string log;
  std::string finalState;
};

int do_run(const RunArgs& args, std::ostream& out) {
  const ScenarioConfig scenario = load_scenario(args.common.scenario);
  const Mode mode = mode_of(args.common.mode);
  SystemState system = make_system(scenario, mode, args.common.seed);
  auto backend = make_backend(args.common.backend, system.seed);
  EngineOptions options;
  options.concurrentInference = args.common.concurrent;
  const RunReport report = run_to_completion(system, *backend, scenario.maxTurns, options);

  const std::string csv = render_report_csv(report);
  if (args.out.empty()) {
    out << csv;
  } else {
    write_file(args.out, csv);
  }
  if (!args.log.empty()) write_file(args.log, log_lines(system));
  if (!args.finalState.empty()) write_file(args.finalState, final_state_to_json(system).dump() + "\n");
  if (!args.out.empty()) {
    out << to_string(mode) << ": " << (report.completed ? "completed" : "incomplete") << " in "
        << report.makespanTurns << " turns, " << report.cumulativeTokens << " tokens\n";
  }
  return report.completed ? kExitCompleted : kExitIncomplete;
}

struct CompareArgs {
  Common common;
  std::string out;
  std::string deltaOut;
};

int do_compare(const CompareArgs& args, std::ostream& out) {
  const ScenarioConfig scenario = load_scenario(args.common.scenario);
  RunReport reports[2];
  const Mode modes[2] = {Mode::GoT, Mode::CGoT};
  for (int i = 0; i < 2; ++i) {
    SystemState system = make_system(scenario, modes[i], args.common.seed);
    auto backend = make_backend(args.common.backend, system.seed);
    reports[i] = run_to_completion(system, *backend, scenario.maxTurns);
  }
  const Comparison comparison = compare(reports[0], reports[1]);
  const std::string csv = render_runs_csv(reports[0], reports[1]);
  if (args.out.empty()) {
    out << csv;
  } else {
    write_file(args.out, csv);
  }
  if (!args.deltaOut.empty()) write_file(args.deltaOut, render_comparison_csv(comparison));
  out << render_summary(comparison, reports[0], reports[1]);
  return reports[0].completed && reports[1].completed ? kExitCompleted : kExitIncomplete;
}

struct ServeArgs {
  Common common;
  std::string host = "127.0.0.1";
  int port = 0;
  int intervalMs = 500;
  std::string log;
};

std::atomic<ControlServer*> g_server{nullptr};

extern "C" void on_signal(int) {
  if (auto* server = g_server.load()) server->stop();
}

int do_serve(const ServeArgs& args, std::ostream& out) {
  const ScenarioConfig scenario = load_scenario(args.common.scenario);
  SystemState system = make_system(scenario, mode_of(args.common.mode), args.common.seed);
  auto backend = make_backend(args.common.backend, system.seed);

  std::shared_ptr<std::ofstream> log_file;
  if (!args.log.empty()) {
    log_file = std::make_shared<std::ofstream>(args.log, std::ios::binary);
    if (!*log_file) throw Error(ErrorCode::InvalidInput, "cannot open " + args.log);
  }
  SessionOptions options;
  options.runInterval = std::chrono::milliseconds(args.intervalMs);
  options.maxTurns = scenario.maxTurns;
  options.engine.concurrentInference = args.common.concurrent;
  if (log_file) {
    options.onTurn = [log_file](const TurnLog& log) { *log_file << to_json(log).dump() << "\n" << std::flush; };
  }

  Session session(std::move(system), std::move(backend), options);
  ControlServer server(session);
  const int port = server.bind(args.host, args.port);
  out << "listening on http://" << args.host << ":" << port << std::endl;

  session.start();
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  g_server = nullptr;
  session.stop();

  const auto snapshot = session.get_state();
  return snapshot->phase == Phase::Completed ? kExitCompleted : kExitIncomplete;
}

void add_common(CLI::App& cmd, Common& common, bool with_mode) {
  cmd.add_option("--scenario", common.scenario, "scenario file, or \"default\"");
  if (with_mode) {
    cmd.add_option("--mode", common.mode, "got | cgot")->check(CLI::IsMember({"got", "cgot"}));
  }
  cmd.add_option("--backend", common.backend, "scripted | http")
      ->check(CLI::IsMember({"scripted", "http"}));
  cmd.add_option("--seed", common.seed, "overrides the scenario seed");
  cmd.add_flag("--concurrent", common.concurrent, "issue a turn's inference calls concurrently");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Composable graph-of-thoughts multi-agent simulator", "cgot"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run one scenario in one mode and write the token report");
  add_common(*run, run_args.common, true);
  run->add_option("--out", run_args.out, "report CSV (stdout when omitted)");
  run->add_option("--log", run_args.log, "per-turn JSON-lines log");
  run->add_option("--final-state", run_args.finalState, "final environment JSON");

  CompareArgs compare_args;
  auto* cmp = app.add_subcommand("compare", "run GoT and CGoT on the same scenario and compare tokens");
  add_common(*cmp, compare_args.common, false);
  cmp->add_option("--out", compare_args.out, "long-format CSV of both runs (stdout when omitted)");
  cmp->add_option("--delta-out", compare_args.deltaOut, "per-turn delta CSV");

  ServeArgs serve_args;
  auto* serve = app.add_subcommand("serve", "interactive run behind the HTTP control plane");
  add_common(*serve, serve_args.common, true);
  serve->add_option("--port", serve_args.port, "listening port (0 picks one)")->required();
  serve->add_option("--host", serve_args.host, "bind address");
  serve->add_option("--interval-ms", serve_args.intervalMs, "delay between turns while running")
      ->check(CLI::NonNegativeNumber);
  serve->add_option("--log", serve_args.log, "per-turn JSON-lines log");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitCompleted;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitCompleted;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitError;
  }

  try {
    if (*run) return do_run(run_args, out);
    if (*cmp) return do_compare(compare_args, out);
    if (*serve) return do_serve(serve_args, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace cgot::cli
