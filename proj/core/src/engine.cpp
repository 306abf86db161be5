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

#include "cgot/engine.hpp"

#include <algorithm>
#include <future>
#include <set>

#include "cgot/error.hpp"
#include "cgot/text.hpp"

namespace cgot {
namespace {

/// The member that steers a composite when members infer separately.
std::optional<AgentId> driver_of(const SystemState& system, const AgentState& composite) {
  for (const auto& member : composite.cargo.agents) {
    const auto it = system.agents.find(member);
    if (it != system.agents.end() && it->second.has(Capability::CarryRobot)) return member;
  }
  return std::nullopt;
}

std::vector<std::string> initial_conditions(const AgentState& agent, const EnvironmentState& env) {
  std::vector<std::string> conditions;
  conditions.push_back("at " + agent.location);
  if (agent.cargo.empty()) {
    conditions.push_back("carrying nothing");
  } else {
    std::vector<std::string> cargo(agent.cargo.packages.begin(), agent.cargo.packages.end());
    cargo.insert(cargo.end(), agent.cargo.agents.begin(), agent.cargo.agents.end());
    conditions.push_back("carrying " + join(cargo, ", "));
  }
  std::vector<std::string> caps;
  for (Capability c : agent.spec.capabilities) caps.emplace_back(to_string(c));
  conditions.push_back("capabilities " + join(caps, ", "));
  std::vector<std::string> pending;
  for (const auto& task : env.pending_tasks()) {
    pending.push_back(std::string(to_string(task.kind)) + "(" + task.target + ")");
  }
  if (!pending.empty()) conditions.push_back("pending " + join(pending, ", "));
  return conditions;
}

void ensure_graph(SystemState& system, const AgentId& unit) {
  if (system.graphs.contains(unit)) return;
  const auto conditions = initial_conditions(system.agents.at(unit), system.env);
  system.graphs.emplace(unit, new_graph(unit, conditions, system.env.turn, system.nodeIds));
}

/// Appends the response to the unit's graph: thoughts chained from the most
/// recent node, every action an Output child of the last thought.
void record_response(SystemState& system, const AgentId& unit, int turn,
                     const InferenceResponse& response) {
  ThoughtGraph& graph = system.graphs.at(unit);
  NodeId parent = *graph.latest();
  for (const auto& thought : response.thoughts) {
    const NodeId parents[] = {parent};
    parent = add_thought(
        graph, ThoughtNode{system.nodeIds.next(), NodeKind::Intermediate, thought, unit, turn},
        parents);
  }
  for (const auto& action : response.actions) {
    const NodeId parents[] = {parent};
    add_thought(graph, ThoughtNode{system.nodeIds.next(), NodeKind::Output, action, unit, turn},
                parents);
  }
}

InferenceResponse infer_with_fallback(InferenceBackend& backend, const InferenceRequest& request,
                                      std::string& substitution) {
  InferenceResponse response;
  try {
    response = backend.infer(request);
  } catch (const Error& error) {
    if (error.code() != ErrorCode::BackendUnavailable) throw;
    substitution = request.agentId + ": " + error.what();
    ScriptedBackend oracle;
    response = oracle.infer(request);
  }
  if (response.actions.empty()) response.actions.push_back("Wait");
  return response;
}

void diff_into(TurnLog& log, const Roster& before_agents, const EnvironmentState& before_env,
               const Roster& after_agents, const EnvironmentState& after_env) {
  for (const auto& [id, after] : after_agents) {
    const auto it = before_agents.find(id);
    if (it != before_agents.end() && it->second.location != after.location) {
      log.moves.push_back({id, it->second.location, after.location});
    }
  }
  for (const auto& [id, after] : after_env.buildings) {
    const auto it = before_env.buildings.find(id);
    const Building before = it == before_env.buildings.end() ? Building{id} : it->second;
    if (!before.needsCleaning && after.needsCleaning) log.flagChanges.push_back(id + ".needsCleaning");
    if (!before.cleaned && after.cleaned) log.flagChanges.push_back(id + ".cleaned");
    if (!before.deliveryStage1Done && after.deliveryStage1Done) {
      log.flagChanges.push_back(id + ".deliveryStage1Done");
    }
    if (!before.deliveryStage2Done && after.deliveryStage2Done) {
      log.flagChanges.push_back(id + ".deliveryStage2Done");
    }
  }
  for (const auto& [id, after] : after_env.packages) {
    const auto it = before_env.packages.find(id);
    const std::string from = it == before_env.packages.end() ? "new" : to_string(it->second);
    const std::string to = to_string(after);
    if (from != to) log.packageMoves.push_back(id + ": " + from + " -> " + to);
  }
}

}  // namespace

SystemState initialize_system(EnvironmentState env, const std::vector<AgentState>& roster,
                              Mode mode, std::uint64_t seed, std::string scenarioHash) {
  SystemState system;
  system.env = std::move(env);
  system.mode = mode;
  system.seed = seed;
  system.scenarioHash = std::move(scenarioHash);
  for (const auto& agent : roster) system.agents.emplace(agent.id(), agent);
  system.initialRosterSize = system.agents.size();
  for (const auto& [id, agent] : system.agents) {
    for (const auto& package : agent.cargo.packages) {
      system.env.packages[package] = PackageLocation::carried_by(id);
    }
  }
  for (const auto& [id, agent] : system.agents) {
    if (agent.active) ensure_graph(system, id);
  }
  return system;
}

AgentView make_view(const SystemState& system, const AgentId& unit,
                    std::vector<std::string> peerDecisions) {
  AgentView view;
  view.self = unit;
  const AgentState& self = system.agents.at(unit);
  const AgentState& body = body_of(system, unit);
  view.body = body;
  if (&body == &self) {
    view.role = self.spec.kind == AgentKind::Composite ? InferenceRole::Composite
                                                       : InferenceRole::Standalone;
  } else {
    view.role = driver_of(system, body) == unit ? InferenceRole::Driver : InferenceRole::Passenger;
  }
  view.env = system.env;
  view.roster = system.agents;
  view.peerDecisions = std::move(peerDecisions);
  view.recentEvents = system.lastEvents;
  return view;
}

DecisionSet conclude(const std::vector<IssuedOutput>& outputs, const SystemState& system) {
  DecisionSet decisions;
  decisions.turn = system.env.turn + 1;

  std::set<AgentId> busy_bodies;
  std::set<PackageId> claimed_packages;
  std::set<SiteId> claimed_cleanings;
  std::set<AgentId> claimed_composites;

  // Lowest issuer id claims contested resources first.
  std::vector<const IssuedOutput*> ordered;
  for (const auto& output : outputs) ordered.push_back(&output);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const IssuedOutput* a, const IssuedOutput* b) { return a->issuer < b->issuer; });

  for (const IssuedOutput* entry : ordered) {
    const IssuedOutput& output = *entry;
    const auto reject = [&](Action action, std::string reason) {
      decisions.rejected.push_back({std::move(action), output.text, std::move(reason)});
    };
    Action fallback = make_wait(output.issuer);
    fallback.source = output.node;

    const auto parsed = parse_action(output.text);
    if (const auto* failure = std::get_if<ParseFailure>(&parsed)) {
      reject(fallback, "parse-failure: " + failure->reason);
      decisions.accepted.push_back(std::move(fallback));
      continue;
    }
    Action action = std::get<Action>(parsed);
    action.issuer = output.issuer;
    action.source = output.node;

    const auto issuer_it = system.agents.find(output.issuer);
    if (issuer_it == system.agents.end()) {
      action.actor = output.issuer;
      reject(action, "unknown-actor");
      continue;
    }
    const AgentState& issuer = issuer_it->second;
    const AgentState& body = body_of(system, output.issuer);
    action.actor = body.id();

    if (&body != &issuer && driver_of(system, body) != issuer.id()) {
      // A carried passenger has no say over the body it rides in.
      action.actor = issuer.id();
      if (action.kind == ActionKind::Wait) {
        decisions.accepted.push_back(std::move(action));
      } else {
        reject(std::move(action), "carried");
      }
      continue;
    }
    if (action.kind == ActionKind::Wait) {
      decisions.accepted.push_back(std::move(action));
      continue;
    }
    if (!can_perform(body, action)) {
      reject(std::move(action), "capability");
      continue;
    }
    if (auto reason = check_action(system.env, system.agents, body, action)) {
      reject(std::move(action), *reason);
      continue;
    }

    std::vector<AgentId> bodies{body.id()};
    if (action.kind == ActionKind::Combine) {
      std::set<AgentId> distinct(action.members.begin(), action.members.end());
      std::optional<std::string> problem;
      bool has_robot = false;
      bool has_carrier = false;
      if (distinct.size() != action.members.size()) problem = "invalid-combine";
      for (const auto& member : action.members) {
        if (problem) break;
        const auto it = system.agents.find(member);
        if (it == system.agents.end()) {
          problem = "unknown-agent";
        } else if (it->second.spec.kind == AgentKind::Composite || !it->second.active) {
          problem = "already-combined";
        } else if (it->second.location != body.location) {
          problem = "not-colocated";
        } else if (is_disabled(system.env, system.agents, it->second)) {
          problem = "disabled";
        } else {
          has_robot = has_robot || is_robot(it->second);
          has_carrier = has_carrier || it->second.has(Capability::CarryRobot);
        }
      }
      if (!problem && has_robot && !has_carrier) problem = "invalid-combine";
      if (problem) {
        reject(std::move(action), *problem);
        continue;
      }
      bodies = action.members;
    }
    if (action.kind == ActionKind::Split && !find_live_composition(system, action.composite)) {
      reject(std::move(action), "unknown-composite");
      continue;
    }

    const bool body_conflict = std::any_of(bodies.begin(), bodies.end(), [&](const AgentId& id) {
      return busy_bodies.contains(id);
    });
    const bool package_conflict = !action.package.empty() && claimed_packages.contains(action.package);
    const bool clean_conflict =
        action.kind == ActionKind::Clean && claimed_cleanings.contains(action.site);
    const bool split_conflict =
        action.kind == ActionKind::Split && claimed_composites.contains(action.composite);
    if (body_conflict || package_conflict || clean_conflict || split_conflict) {
      reject(std::move(action), "resource-conflict");
      continue;
    }
    busy_bodies.insert(bodies.begin(), bodies.end());
    if (!action.package.empty()) claimed_packages.insert(action.package);
    if (action.kind == ActionKind::Clean) claimed_cleanings.insert(action.site);
    if (action.kind == ActionKind::Split) claimed_composites.insert(action.composite);
    decisions.accepted.push_back(std::move(action));
  }
  return decisions;
}

void run_turn(SystemState& system, InferenceBackend& backend, const EngineOptions& options) {
  if (all_tasks_complete(system.env)) {
    throw Error(ErrorCode::InvalidInput, "run complete");
  }
  const int turn = system.env.turn + 1;
  TurnLog log;
  log.turn = turn;
  log.inferenceUnits = inference_units(system);
  log.compositionLive = std::any_of(system.compositions.begin(), system.compositions.end(),
                                    [](const CompositionRecord& r) { return r.live(); });
  for (const auto& unit : log.inferenceUnits) ensure_graph(system, unit);

  // Inference.
  std::vector<std::string> peers;
  if (options.concurrentInference) {
    std::vector<std::string> previous;
    if (!system.log.empty()) {
      for (const auto& action : system.log.back().accepted) {
        previous.push_back(action.issuer + ": " + format_action(action));
      }
    }
    std::vector<InferenceRequest> requests;
    for (const auto& unit : log.inferenceUnits) {
      auto view = std::make_shared<const AgentView>(make_view(system, unit, previous));
      requests.push_back({unit, render_prompt(*view, &system.graphs.at(unit)), turn, view});
    }
    std::vector<std::future<std::pair<InferenceResponse, std::string>>> pending;
    for (const auto& request : requests) {
      pending.push_back(std::async(std::launch::async, [&backend, &request] {
        std::string substitution;
        auto response = infer_with_fallback(backend, request, substitution);
        return std::make_pair(std::move(response), std::move(substitution));
      }));
    }
    for (std::size_t i = 0; i < requests.size(); ++i) {
      auto [response, substitution] = pending[i].get();
      const AgentId& unit = requests[i].agentId;
      if (!substitution.empty()) log.substitutions.push_back(substitution);
      record_response(system, unit, turn, response);
      system.ledger.record(
          {turn, unit, response.usage.promptTokens, response.usage.completionTokens});
      log.usage.push_back({unit, response.usage.promptTokens, response.usage.completionTokens});
    }
  } else {
    for (const auto& unit : log.inferenceUnits) {
      auto view = std::make_shared<const AgentView>(make_view(system, unit, peers));
      const InferenceRequest request{unit, render_prompt(*view, &system.graphs.at(unit)), turn,
                                     view};
      std::string substitution;
      const InferenceResponse response = infer_with_fallback(backend, request, substitution);
      if (!substitution.empty()) log.substitutions.push_back(substitution);
      record_response(system, unit, turn, response);
      system.ledger.record(
          {turn, unit, response.usage.promptTokens, response.usage.completionTokens});
      log.usage.push_back({unit, response.usage.promptTokens, response.usage.completionTokens});
      for (const auto& action : response.actions) peers.push_back(unit + ": " + action);
    }
  }

  // Conclude.
  std::vector<IssuedOutput> outputs;
  for (const auto& unit : log.inferenceUnits) {
    for (const auto& node : collect_outputs(system.graphs.at(unit), turn)) {
      outputs.push_back({unit, node.id, node.content});
    }
  }
  DecisionSet decisions = conclude(outputs, system);

  const Roster agents_before = system.agents;
  const EnvironmentState env_before = system.env;

  // T(G): combinations and splits take effect before execution.
  const TransformOutcome transform = apply_transformations(system, decisions);
  log.compositesFormed = transform.formed;
  log.compositesDissolved = transform.dissolved;

  // Execution: E' = H(E, D, I).
  const auto due = take_due_events(system.env, turn);
  StepOutcome step = step_environment(system.env, system.agents, decisions, due);
  std::set<NodeId> failed;
  for (const auto& rejection : step.rejected) failed.insert(rejection.action.source);
  std::erase_if(decisions.accepted, [&](const Action& a) {
    return a.source != 0 && failed.contains(a.source);
  });
  for (auto& rejection : step.rejected) decisions.rejected.push_back(std::move(rejection));

  system.env = std::move(step.env);
  system.agents = std::move(step.roster);
  system.lastEvents = step.eventsApplied;

  log.accepted = decisions.accepted;
  log.rejected = decisions.rejected;
  log.eventsApplied = std::move(step.eventsApplied);
  log.eventsRejected = std::move(step.eventsRejected);
  log.arrivals = std::move(step.arrivals);
  diff_into(log, agents_before, env_before, system.agents, system.env);
  system.log.push_back(std::move(log));
}

RunReport run_to_completion(SystemState& system, InferenceBackend& backend, int maxTurns,
                            const EngineOptions& options) {
  if (maxTurns < 1) throw Error(ErrorCode::InvalidInput, "maxTurns must be at least 1");
  while (!all_tasks_complete(system.env) && system.env.turn < maxTurns) {
    run_turn(system, backend, options);
  }
  return make_report(system, maxTurns);
}

RunReport make_report(const SystemState& system, int maxTurns) {
  RunReport report;
  report.mode = system.mode;
  report.completed = all_tasks_complete(system.env);
  report.makespanTurns = system.env.turn;
  report.maxTurns = maxTurns;
  report.perTurnTokens = per_turn_totals(system.ledger);
  report.perTurnTokens.resize(static_cast<std::size_t>(system.env.turn), 0);
  report.perTurnActive.assign(static_cast<std::size_t>(system.env.turn), 0);
  report.perTurnCompositionLive.assign(static_cast<std::size_t>(system.env.turn), false);
  for (const auto& log : system.log) {
    if (log.turn < 1 || log.turn > system.env.turn) continue;
    const auto index = static_cast<std::size_t>(log.turn - 1);
    report.perTurnActive[index] = static_cast<int>(log.inferenceUnits.size());
    report.perTurnCompositionLive[index] = log.compositionLive;
    report.eventsHandled += static_cast<int>(log.eventsApplied.size());
  }
  for (auto tokens : report.perTurnTokens) report.cumulativeTokens += tokens;
  report.compositionsFormed = static_cast<int>(system.compositions.size());
  report.scenarioHash = system.scenarioHash;
  report.seed = system.seed;
  return report;
}

}  // namespace cgot
