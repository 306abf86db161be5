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

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "cgot/engine.hpp"

namespace httplib {
class Server;
}

namespace cgot {

enum class Phase { AwaitingStep, Running, Completed };

std::string_view to_string(Phase phase);

/// Immutable turn-boundary view of a run.
struct Snapshot {
  int turn = 0;
  Phase phase = Phase::AwaitingStep;
  std::uint64_t version = 0;
  nlohmann::json document;
  std::string text;       // document.dump()
  std::string reportCsv;  // token report so far, same format as `run --out`
};

Snapshot make_snapshot(const SystemState& system, Phase phase, std::uint64_t version,
                       int maxTurns = 50);

enum class CommandKind { Step, Run, Pause, InjectEvent };

struct ControlCommand {
  CommandKind kind = CommandKind::Step;
  std::optional<ExternalEvent> event;  // InjectEvent only
};

/// {"kind": "Step"|"Run"|"Pause"|"InjectEvent", "event": {...}}.
/// Throws ValidationError.
ControlCommand command_from_json(const nlohmann::json& doc);

struct CommandResult {
  bool accepted = false;
  std::string message;
  std::optional<int> appliesAtTurn;  // InjectEvent acks
  int turn = 0;                      // completed turns when handled

  nlohmann::json to_json() const;
};

struct SessionOptions {
  std::chrono::milliseconds runInterval{500};
  int maxTurns = 50;
  EngineOptions engine;
  std::function<void(const TurnLog&)> onTurn;  // called on the engine thread
};

/// Owns a run and its engine thread. Observers talk to it only through the
/// inbound command queue (drained at turn boundaries) and the published
/// snapshots.
class Session {
 public:
  Session(SystemState system, std::unique_ptr<InferenceBackend> backend,
          SessionOptions options = {});
  ~Session();

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  void start();
  void stop();

  std::shared_ptr<const Snapshot> get_state() const;

  /// Enqueues the command and waits for the engine thread's answer.
  CommandResult post_command(ControlCommand command,
                             std::chrono::milliseconds timeout = std::chrono::seconds(10));

  /// Next snapshot with version > `after`, or nullptr on timeout.
  std::shared_ptr<const Snapshot> wait_for_update(std::uint64_t after,
                                                  std::chrono::milliseconds timeout) const;

  /// Turn log of the most recent turn, if any.
  std::optional<nlohmann::json> last_log() const;

 private:
  struct Pending {
    ControlCommand command;
    std::promise<CommandResult> reply;
  };

  void loop();
  CommandResult handle(const ControlCommand& command);
  void step_once();
  bool finished() const;
  Phase phase() const;
  void publish();

  // Engine-thread state.
  SystemState system_;
  std::unique_ptr<InferenceBackend> backend_;
  SessionOptions options_;
  bool running_ = false;

  // Inbound queue.
  std::mutex inbox_mutex_;
  std::condition_variable inbox_cv_;
  std::deque<Pending> inbox_;
  bool stopping_ = false;

  // Outbound snapshots.
  mutable std::mutex snapshot_mutex_;
  mutable std::condition_variable snapshot_cv_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::optional<nlohmann::json> last_log_;

  std::thread thread_;
};

/// HTTP transport: GET /state, POST /command, GET /stream (server-sent
/// events, one snapshot per change), GET /report.csv.
class ControlServer {
 public:
  explicit ControlServer(Session& session);
  ~ControlServer();

  ControlServer(const ControlServer&) = delete;
  ControlServer& operator=(const ControlServer&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires bind().
  void listen();
  void start();
  void stop();

 private:
  Session& session_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace cgot
