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

#include "cgot/control_plane.hpp"

#include <httplib.h>

#include "cgot/error.hpp"
#include "cgot/serialize.hpp"

namespace cgot {

using nlohmann::json;

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::AwaitingStep: return "AwaitingStep";
    case Phase::Running: return "Running";
    case Phase::Completed: return "Completed";
  }
  return "AwaitingStep";
}

Snapshot make_snapshot(const SystemState& system, Phase phase, std::uint64_t version,
                       int maxTurns) {
  json agents = json::array();
  for (const auto& [id, agent] : system.agents) {
    std::vector<std::string> cargo(agent.cargo.packages.begin(), agent.cargo.packages.end());
    cargo.insert(cargo.end(), agent.cargo.agents.begin(), agent.cargo.agents.end());
    agents.push_back({{"id", id},
                      {"kind", std::string(to_string(agent.spec.kind))},
                      {"location", agent.location},
                      {"active", agent.active},
                      {"memberOf", agent.memberOf ? json(*agent.memberOf) : json(nullptr)},
                      {"cargo", cargo},
                      {"disabled", system.env.disabled.contains(id)}});
  }
  const json env = to_json(system.env);
  json pending = json::array();
  for (const auto& task : system.env.pending_tasks()) {
    json item = {{"kind", std::string(to_string(task.kind))}, {"target", task.target}};
    if (task.package) item["package"] = *task.package;
    pending.push_back(item);
  }
  json graphs = json::object();
  for (const auto& unit : inference_units(system)) {
    if (const auto it = system.graphs.find(unit); it != system.graphs.end()) {
      graphs[unit] = to_json(it->second);
    }
  }
  json compositions = json::array();
  for (const auto& record : system.compositions) compositions.push_back(to_json(record));
  auto totals = per_turn_totals(system.ledger);
  totals.resize(static_cast<std::size_t>(system.env.turn), 0);

  Snapshot snapshot;
  snapshot.turn = system.env.turn;
  snapshot.phase = phase;
  snapshot.version = version;
  snapshot.document = {{"turn", system.env.turn},
                       {"phase", std::string(to_string(phase))},
                       {"mode", std::string(to_string(system.mode))},
                       {"agents", agents},
                       {"buildings", env["buildings"]},
                       {"packages", env["packages"]},
                       {"blocked", env["blocked"]},
                       {"sites", env["sites"]},
                       {"pendingTasks", pending},
                       {"perTurnTokens", totals},
                       {"graphs", graphs},
                       {"compositions", compositions},
                       {"queuedEvents", env["eventQueue"]}};
  snapshot.text = snapshot.document.dump();
  snapshot.reportCsv = render_report_csv(make_report(system, maxTurns));
  return snapshot;
}

ControlCommand command_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw Error(ErrorCode::ValidationError, "command.kind: missing");
  }
  const std::string kind = doc["kind"].get<std::string>();
  ControlCommand command;
  if (kind == "Step") {
    command.kind = CommandKind::Step;
  } else if (kind == "Run") {
    command.kind = CommandKind::Run;
  } else if (kind == "Pause") {
    command.kind = CommandKind::Pause;
  } else if (kind == "InjectEvent") {
    command.kind = CommandKind::InjectEvent;
    if (!doc.contains("event")) throw Error(ErrorCode::ValidationError, "command.event: missing");
    command.event = event_from_json(doc["event"], "command.event");
  } else {
    throw Error(ErrorCode::ValidationError, "command.kind: unknown command " + kind);
  }
  return command;
}

json CommandResult::to_json() const {
  json doc = {{"ok", accepted}, {"message", message}, {"turn", turn}};
  if (appliesAtTurn) doc["appliesAtTurn"] = *appliesAtTurn;
  return doc;
}

Session::Session(SystemState system, std::unique_ptr<InferenceBackend> backend,
                 SessionOptions options)
    : system_(std::move(system)), backend_(std::move(backend)), options_(std::move(options)) {
  publish();
}

Session::~Session() { stop(); }

void Session::start() {
  if (thread_.joinable()) return;
  {
    std::lock_guard lock(inbox_mutex_);
    stopping_ = false;
  }
  thread_ = std::thread([this] { loop(); });
}

void Session::stop() {
  {
    std::lock_guard lock(inbox_mutex_);
    stopping_ = true;
  }
  inbox_cv_.notify_all();
  if (thread_.joinable()) thread_.join();
  // Anyone still waiting gets an answer.
  std::lock_guard lock(inbox_mutex_);
  for (auto& pending : inbox_) {
    pending.reply.set_value({false, "session stopped", std::nullopt, system_.env.turn});
  }
  inbox_.clear();
}

std::shared_ptr<const Snapshot> Session::get_state() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

std::optional<json> Session::last_log() const {
  std::lock_guard lock(snapshot_mutex_);
  return last_log_;
}

CommandResult Session::post_command(ControlCommand command, std::chrono::milliseconds timeout) {
  std::future<CommandResult> reply;
  {
    std::lock_guard lock(inbox_mutex_);
    if (stopping_) return {false, "session stopped", std::nullopt, 0};
    inbox_.push_back({std::move(command), {}});
    reply = inbox_.back().reply.get_future();
  }
  inbox_cv_.notify_all();
  if (reply.wait_for(timeout) != std::future_status::ready) {
    return {false, "timed out waiting for the engine", std::nullopt, 0};
  }
  return reply.get();
}

std::shared_ptr<const Snapshot> Session::wait_for_update(std::uint64_t after,
                                                         std::chrono::milliseconds timeout) const {
  std::unique_lock lock(snapshot_mutex_);
  if (!snapshot_cv_.wait_for(lock, timeout, [&] { return snapshot_->version > after; })) {
    return nullptr;
  }
  return snapshot_;
}

bool Session::finished() const {
  return all_tasks_complete(system_.env) || system_.env.turn >= options_.maxTurns;
}

Phase Session::phase() const {
  if (finished()) return Phase::Completed;
  return running_ ? Phase::Running : Phase::AwaitingStep;
}

void Session::publish() {
  std::uint64_t version = 0;
  {
    std::lock_guard lock(snapshot_mutex_);
    version = snapshot_ ? snapshot_->version + 1 : 1;
  }
  auto snapshot = std::make_shared<const Snapshot>(make_snapshot(system_, phase(), version, options_.maxTurns));
  {
    std::lock_guard lock(snapshot_mutex_);
    snapshot_ = std::move(snapshot);
    if (!system_.log.empty()) last_log_ = to_json(system_.log.back());
  }
  snapshot_cv_.notify_all();
}

void Session::step_once() {
  run_turn(system_, *backend_, options_.engine);
  if (options_.onTurn) options_.onTurn(system_.log.back());
  if (finished()) running_ = false;
  publish();
}

CommandResult Session::handle(const ControlCommand& command) {
  const int turn = system_.env.turn;
  switch (command.kind) {
    case CommandKind::Step:
      if (finished()) return {false, "run complete", std::nullopt, turn};
      step_once();
      return {true, "stepped to turn " + std::to_string(system_.env.turn), std::nullopt,
              system_.env.turn};
    case CommandKind::Run:
      if (finished()) return {false, "run complete", std::nullopt, turn};
      if (running_) return {true, "already running", std::nullopt, turn};
      running_ = true;
      publish();
      return {true, "running", std::nullopt, turn};
    case CommandKind::Pause:
      if (!running_) return {true, "already paused", std::nullopt, turn};
      running_ = false;
      publish();
      return {true, "paused", std::nullopt, turn};
    case CommandKind::InjectEvent: {
      if (!command.event) return {false, "missing event", std::nullopt, turn};
      if (finished()) return {false, "run complete", std::nullopt, turn};
      ExternalEvent event = *command.event;
      event.atTurn = turn + 1;
      try {
        check_event(system_.env, system_.agents, event);
      } catch (const Error& error) {
        return {false, error.what(), std::nullopt, turn};
      }
      system_.env.eventQueue.push_back(event);
      publish();
      return {true, "applies at turn " + std::to_string(event.atTurn), event.atTurn, turn};
    }
  }
  return {false, "unknown command", std::nullopt, turn};
}

void Session::loop() {
  using Clock = std::chrono::steady_clock;
  auto next_step = Clock::now();
  while (true) {
    std::deque<Pending> batch;
    {
      std::unique_lock lock(inbox_mutex_);
      const auto ready = [&] { return stopping_ || !inbox_.empty(); };
      if (running_) {
        inbox_cv_.wait_until(lock, next_step, ready);
      } else {
        inbox_cv_.wait(lock, ready);
      }
      if (stopping_) return;
      batch.swap(inbox_);
    }
    for (auto& pending : batch) {
      const bool was_running = running_;
      CommandResult result;
      try {
        result = handle(pending.command);
      } catch (const std::exception& error) {
        result = {false, error.what(), std::nullopt, system_.env.turn};
      }
      if (!was_running && running_) next_step = Clock::now();
      pending.reply.set_value(std::move(result));
    }
    if (running_ && Clock::now() >= next_step) {
      try {
        step_once();
      } catch (const std::exception&) {
        running_ = false;
        publish();
      }
      next_step = Clock::now() + options_.runInterval;
    }
  }
}

ControlServer::ControlServer(Session& session)
    : session_(session), server_(std::make_unique<httplib::Server>()) {
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server_->Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  server_->Get("/state", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(session_.get_state()->text, "application/json");
  });

  server_->Get("/report.csv", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(session_.get_state()->reportCsv, "text/csv");
  });

  server_->Post("/command", [this](const httplib::Request& req, httplib::Response& res) {
    const json doc = json::parse(req.body, nullptr, false);
    if (doc.is_discarded()) {
      res.status = 400;
      res.set_content(json{{"ok", false}, {"message", "body is not JSON"}}.dump(), "application/json");
      return;
    }
    try {
      const CommandResult result = session_.post_command(command_from_json(doc));
      res.status = result.accepted ? 200 : 409;
      res.set_content(result.to_json().dump(), "application/json");
    } catch (const Error& error) {
      res.status = 400;
      res.set_content(json{{"ok", false}, {"message", error.what()}}.dump(), "application/json");
    }
  });

  server_->Get("/stream", [this](const httplib::Request&, httplib::Response& res) {
    auto last = std::make_shared<std::uint64_t>(0);
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream", [this, last](std::size_t, httplib::DataSink& sink) {
          while (sink.is_writable()) {
            auto snapshot = session_.wait_for_update(*last, std::chrono::milliseconds(250));
            if (!server_->is_running()) return false;
            if (!snapshot) continue;
            *last = snapshot->version;
            const std::string event = "data: " + snapshot->text + "\n\n";
            if (!sink.write(event.data(), event.size())) return false;
            return true;
          }
          return false;
        });
  });
}

ControlServer::~ControlServer() { stop(); }

int ControlServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::InvalidInput, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void ControlServer::listen() { server_->listen_after_bind(); }

void ControlServer::start() {
  if (thread_.joinable()) return;
  thread_ = std::thread([this] { listen(); });
  server_->wait_until_ready();
}

void ControlServer::stop() {
  if (server_->is_running()) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace cgot
