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

#include "cgot/serialize.hpp"

#include "cgot/error.hpp"

namespace cgot {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ValidationError, path + ": " + what);
}

// Literal ints built in code arrive signed; parsed text arrives unsigned.
bool is_id(const json& value) {
  if (!value.is_number_integer()) return false;
  return value.is_number_unsigned() || value.get<std::int64_t>() >= 0;
}

std::string required_string(const json& doc, const std::string& key, const std::string& path) {
  if (!doc.contains(key)) invalid(path + "." + key, "missing");
  if (!doc[key].is_string()) invalid(path + "." + key, "expected a string");
  return doc[key].get<std::string>();
}

}  // namespace

json to_json(const ThoughtGraph& graph) {
  json nodes = json::array();
  for (const auto& node : graph.nodes()) {
    nodes.push_back({{"id", node.id},
                     {"kind", std::string(to_string(node.kind))},
                     {"content", node.content},
                     {"producer", node.producer},
                     {"turn", node.turn}});
  }
  json edges = json::array();
  for (const auto& edge : graph.edges()) edges.push_back({edge.from, edge.to});
  return {{"owner", graph.owner()}, {"nodes", nodes}, {"edges", edges}};
}

ThoughtGraph graph_from_json(const json& doc) {
  if (!doc.is_object()) invalid("graph", "expected an object");
  const std::string owner = required_string(doc, "owner", "graph");
  std::vector<ThoughtNode> nodes;
  std::vector<ThoughtEdge> edges;
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) invalid("graph.nodes", "expected an array");
  for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
    const auto& item = doc["nodes"][i];
    const std::string path = "graph.nodes[" + std::to_string(i) + "]";
    if (!item.is_object() || !item.contains("id") || !is_id(item["id"])) {
      invalid(path + ".id", "expected an unsigned id");
    }
    const auto kind = parse_node_kind(required_string(item, "kind", path));
    if (!kind) invalid(path + ".kind", "unknown node kind");
    nodes.push_back({item["id"].get<NodeId>(), *kind, required_string(item, "content", path),
                     required_string(item, "producer", path), item.value("turn", 0)});
  }
  if (!doc.contains("edges") || !doc["edges"].is_array()) invalid("graph.edges", "expected an array");
  for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
    const auto& item = doc["edges"][i];
    if (!item.is_array() || item.size() != 2 || !is_id(item[0]) || !is_id(item[1])) {
      invalid("graph.edges[" + std::to_string(i) + "]", "expected [from, to]");
    }
    edges.push_back({item[0].get<NodeId>(), item[1].get<NodeId>()});
  }
  return ThoughtGraph::from_parts(owner, std::move(nodes), std::move(edges));
}

json to_json(const AgentState& agent) {
  json caps = json::array();
  for (Capability c : agent.spec.capabilities) caps.push_back(std::string(to_string(c)));
  json doc = {{"id", agent.id()},
              {"kind", std::string(to_string(agent.spec.kind))},
              {"capabilities", caps},
              {"moveCostPerEdge", agent.spec.moveCostPerEdge},
              {"location", agent.location},
              {"cargo", {{"packages", agent.cargo.packages}, {"agents", agent.cargo.agents}}},
              {"active", agent.active},
              {"memberOf", agent.memberOf ? json(*agent.memberOf) : json(nullptr)}};
  if (agent.transit) {
    doc["transit"] = {{"towards", agent.transit->towards}, {"progress", agent.transit->progress}};
  }
  return doc;
}

json to_json(const EnvironmentState& env) {
  json buildings = json::array();
  for (const auto& [id, b] : env.buildings) {
    buildings.push_back({{"id", id},
                         {"needsCleaning", b.needsCleaning},
                         {"cleaned", b.cleaned},
                         {"deliveryStage1Done", b.deliveryStage1Done},
                         {"deliveryStage2Done", b.deliveryStage2Done}});
  }
  json packages = json::object();
  for (const auto& [id, where] : env.packages) packages[id] = to_string(where);
  json tasks = json::array();
  for (const auto& task : env.tasks) {
    json item = {{"kind", std::string(to_string(task.kind))},
                 {"target", task.target},
                 {"completed", task.completed}};
    if (task.package) item["package"] = *task.package;
    tasks.push_back(item);
  }
  json edges = json::array();
  for (const auto& edge : env.map.edges()) edges.push_back({edge.a, edge.b, edge.cost});
  json queue = json::array();
  for (const auto& event : env.eventQueue) queue.push_back(to_json(event));
  return {{"turn", env.turn},
          {"sites", env.map.sites()},
          {"edges", edges},
          {"blocked", env.map.blocked()},
          {"buildings", buildings},
          {"packages", packages},
          {"tasks", tasks},
          {"eventQueue", queue},
          {"disabled", env.disabled}};
}

json to_json(const ExternalEvent& event) {
  json doc = {{"kind", std::string(to_string(event.kind))}, {"atTurn", event.atTurn}};
  switch (event.kind) {
    case EventKind::BuildingBlocked:
    case EventKind::BuildingUnblocked: doc["building"] = event.building; break;
    case EventKind::NewTask:
      doc["building"] = event.building;
      doc["task"] = std::string(to_string(event.taskKind));
      break;
    case EventKind::AgentDisabled:
    case EventKind::AgentEnabled: doc["agent"] = event.agent; break;
    case EventKind::HumanInstruction: doc["text"] = event.instruction; break;
  }
  return doc;
}

ExternalEvent event_from_json(const json& doc, const std::string& path) {
  if (!doc.is_object()) invalid(path, "expected an object");
  ExternalEvent event;
  const auto kind = parse_event_kind(required_string(doc, "kind", path));
  if (!kind) invalid(path + ".kind", "unknown event kind");
  event.kind = *kind;
  if (doc.contains("atTurn")) {
    if (!doc["atTurn"].is_number_integer() || doc["atTurn"].get<int>() < 0) {
      invalid(path + ".atTurn", "expected a non-negative integer");
    }
    event.atTurn = doc["atTurn"].get<int>();
  }
  switch (event.kind) {
    case EventKind::BuildingBlocked:
    case EventKind::BuildingUnblocked:
      event.building = required_string(doc, "building", path);
      break;
    case EventKind::NewTask: {
      event.building = required_string(doc, "building", path);
      const auto task = parse_task_kind(required_string(doc, "task", path));
      if (!task) invalid(path + ".task", "expected Clean or Deliver");
      event.taskKind = *task;
      break;
    }
    case EventKind::AgentDisabled:
    case EventKind::AgentEnabled: event.agent = required_string(doc, "agent", path); break;
    case EventKind::HumanInstruction: event.instruction = required_string(doc, "text", path); break;
  }
  return event;
}

json to_json(const Action& action) {
  return {{"actor", action.actor},
          {"issuer", action.issuer},
          {"action", format_action(action)},
          {"node", action.source}};
}

json to_json(const CompositionRecord& record) {
  return {{"compositeId", record.compositeId},
          {"members", record.members},
          {"formedAtTurn", record.formedAtTurn},
          {"dissolvedAtTurn",
           record.dissolvedAtTurn ? json(*record.dissolvedAtTurn) : json(nullptr)}};
}

json to_json(const TurnLog& log) {
  json usage = json::array();
  for (const auto& entry : log.usage) {
    usage.push_back({{"agent", entry.agentId},
                     {"promptTokens", entry.promptTokens},
                     {"completionTokens", entry.completionTokens}});
  }
  json accepted = json::array();
  for (const auto& action : log.accepted) accepted.push_back(to_json(action));
  json rejected = json::array();
  for (const auto& rejection : log.rejected) {
    json item = to_json(rejection.action);
    item["text"] = rejection.text;
    item["reason"] = rejection.reason;
    rejected.push_back(item);
  }
  json events = json::array();
  for (const auto& event : log.eventsApplied) events.push_back(to_json(event));
  json events_rejected = json::array();
  for (const auto& [event, reason] : log.eventsRejected) {
    json item = to_json(event);
    item["reason"] = reason;
    events_rejected.push_back(item);
  }
  json arrivals = json::array();
  for (const auto& arrival : log.arrivals) {
    arrivals.push_back({{"agent", arrival.agent}, {"site", arrival.site}});
  }
  json moves = json::array();
  for (const auto& move : log.moves) {
    moves.push_back({{"agent", move.agent}, {"from", move.from}, {"to", move.to}});
  }
  return {{"turn", log.turn},
          {"activeAgents", log.inferenceUnits},
          {"inferenceCalls", log.usage.size()},
          {"usage", usage},
          {"substitutions", log.substitutions},
          {"accepted", accepted},
          {"rejected", rejected},
          {"compositesFormed", log.compositesFormed},
          {"compositesDissolved", log.compositesDissolved},
          {"eventsApplied", events},
          {"eventsRejected", events_rejected},
          {"envDiff",
           {{"arrivals", arrivals},
            {"moves", moves},
            {"flags", log.flagChanges},
            {"packages", log.packageMoves}}}};
}

json final_state_to_json(const SystemState& system) {
  json agents = json::array();
  for (const auto& [id, agent] : system.agents) agents.push_back(to_json(agent));
  json compositions = json::array();
  for (const auto& record : system.compositions) compositions.push_back(to_json(record));
  return {{"mode", std::string(to_string(system.mode))},
          {"seed", system.seed},
          {"scenarioHash", system.scenarioHash},
          {"environment", to_json(system.env)},
          {"agents", agents},
          {"compositions", compositions}};
}

}  // namespace cgot
