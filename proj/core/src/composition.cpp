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

#include "cgot/composition.hpp"

#include <algorithm>
#include <set>

#include "cgot/error.hpp"
#include "cgot/text.hpp"

namespace cgot {
namespace {

int forming_turn(const SystemState& system) { return system.env.turn + 1; }

/// Attachment point for marker nodes.
std::optional<NodeId> anchor_of(const ThoughtGraph& graph) {
  if (auto output = graph.latest_of_kind(NodeKind::Output)) return output;
  return graph.latest_of_kind(NodeKind::Initial);
}

CompositionRecord* find_live_record(SystemState& system, const AgentId& id) {
  for (auto& record : system.compositions) {
    if (record.compositeId == id && record.live()) return &record;
  }
  return nullptr;
}

}  // namespace

AgentId combine(SystemState& system, std::vector<AgentId> members) {
  if (members.size() < 2) {
    throw Error(ErrorCode::InvalidInput, "combine needs at least two members");
  }
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw Error(ErrorCode::InvalidInput, "combine members must be distinct");
  }

  std::vector<AgentState*> states;
  for (const auto& id : members) {
    const auto it = system.agents.find(id);
    if (it == system.agents.end()) throw Error(ErrorCode::InvalidInput, "unknown agent " + id);
    AgentState& agent = it->second;
    if (agent.spec.kind == AgentKind::Composite || !agent.active || agent.memberOf) {
      throw Error(ErrorCode::AlreadyCombined, id + " is already part of a composition");
    }
    states.push_back(&agent);
  }
  const SiteId location = states.front()->location;
  for (const auto* agent : states) {
    if (agent->location != location) {
      throw Error(ErrorCode::NotColocated, agent->id() + " is at " + agent->location +
                                               ", not " + location);
    }
  }
  const bool has_robot = std::any_of(states.begin(), states.end(),
                                     [](const AgentState* a) { return is_robot(*a); });
  const bool has_carrier = std::any_of(states.begin(), states.end(), [](const AgentState* a) {
    return a->has(Capability::CarryRobot);
  });
  if (has_robot && !has_carrier) {
    throw Error(ErrorCode::InvalidInput, "no member can carry the robots in " + join(members, "+"));
  }

  const AgentId composite_id = "C" + std::to_string(system.nextCompositeIndex++);
  const int turn = forming_turn(system);

  AgentState composite;
  composite.spec.id = composite_id;
  composite.spec.kind = AgentKind::Composite;
  composite.spec.moveCostPerEdge = states.front()->spec.moveCostPerEdge;
  composite.location = location;
  for (AgentState* agent : states) {
    composite.spec.capabilities.insert(agent->spec.capabilities.begin(),
                                       agent->spec.capabilities.end());
    composite.spec.moveCostPerEdge =
        std::min(composite.spec.moveCostPerEdge, agent->spec.moveCostPerEdge);
    for (const auto& package : agent->cargo.packages) {
      composite.cargo.packages.insert(package);
      system.env.packages[package] = PackageLocation::carried_by(composite_id);
    }
    composite.cargo.agents.insert(agent->id());
    agent->cargo.packages.clear();
    agent->active = false;
    agent->memberOf = composite_id;
    agent->transit.reset();
  }

  CompositionRecord record{composite_id, members, turn, std::nullopt, {}};
  if (system.mode == Mode::CGoT) {
    ThoughtGraph merged(composite_id);
    std::vector<NodeId> anchors;
    for (const auto& id : members) {
      auto it = system.graphs.find(id);
      if (it == system.graphs.end()) continue;
      record.memberGraphSnapshots.emplace(id, it->second);
      merged.absorb(it->second);
      if (auto anchor = anchor_of(it->second)) anchors.push_back(*anchor);
      system.graphs.erase(it);
    }
    const std::string content = "combine " + composite_id + " = " + join(members, "+");
    if (anchors.empty()) {
      // Members without graphs: start the composite from a condition node.
      const std::vector<std::string> conditions{content};
      merged = new_graph(composite_id, conditions, turn, system.nodeIds);
    } else {
      add_thought(merged,
                  ThoughtNode{system.nodeIds.next(), NodeKind::CompositionMarker, content,
                              composite_id, turn},
                  anchors);
    }
    system.graphs.emplace(composite_id, std::move(merged));
  }

  system.agents.emplace(composite_id, std::move(composite));
  system.compositions.push_back(std::move(record));
  return composite_id;
}

std::vector<AgentId> split(SystemState& system, const AgentId& composite_id) {
  CompositionRecord* record = find_live_record(system, composite_id);
  const auto composite_it = system.agents.find(composite_id);
  if (record == nullptr || composite_it == system.agents.end()) {
    throw Error(ErrorCode::UnknownComposite, "no live composite " + composite_id);
  }
  const AgentState composite = composite_it->second;
  const int turn = forming_turn(system);

  AgentState* package_holder = nullptr;
  for (const auto& id : record->members) {
    AgentState& member = system.agents.at(id);
    member.active = true;
    member.memberOf.reset();
    member.location = composite.location;
    member.transit.reset();
    if (package_holder == nullptr && member.has(Capability::CarryPackage)) package_holder = &member;
  }
  for (const auto& package : composite.cargo.packages) {
    if (package_holder != nullptr) {
      package_holder->cargo.packages.insert(package);
      system.env.packages[package] = PackageLocation::carried_by(package_holder->id());
    } else {
      system.env.packages[package] = PackageLocation::at_site(composite.location);
    }
  }

  if (system.mode == Mode::CGoT) {
    std::set<NodeId> inherited;
    for (const auto& [id, snapshot] : record->memberGraphSnapshots) {
      for (const auto& node : snapshot.nodes()) inherited.insert(node.id);
    }
    std::vector<std::string> decided;
    if (const auto graph = system.graphs.find(composite_id); graph != system.graphs.end()) {
      std::vector<ThoughtNode> outputs;
      for (const auto& node : graph->second.nodes()) {
        if (node.kind == NodeKind::Output && !inherited.contains(node.id)) outputs.push_back(node);
      }
      std::sort(outputs.begin(), outputs.end(),
                [](const ThoughtNode& a, const ThoughtNode& b) { return a.id < b.id; });
      for (const auto& node : outputs) decided.push_back(node.content);
      system.graphs.erase(graph);
    }
    const std::string summary = "split " + composite_id + ": " + join(decided, "; ");
    for (const auto& [id, snapshot] : record->memberGraphSnapshots) {
      ThoughtGraph restored = snapshot;
      const NodeId marker = system.nodeIds.next();
      if (auto anchor = anchor_of(restored)) {
        const NodeId parents[] = {*anchor};
        add_thought(restored, ThoughtNode{marker, NodeKind::SplitMarker, summary, id, turn},
                    parents);
      }
      system.graphs[id] = std::move(restored);
    }
  }

  record->dissolvedAtTurn = turn;
  system.agents.erase(composite_id);
  return record->members;
}

TransformOutcome apply_transformations(SystemState& system, DecisionSet& decisions) {
  std::vector<Action> combines;
  std::vector<Action> splits;
  std::vector<Action> rest;
  for (auto& action : decisions.accepted) {
    if (action.kind == ActionKind::Combine) {
      combines.push_back(std::move(action));
    } else if (action.kind == ActionKind::Split) {
      splits.push_back(std::move(action));
    } else {
      rest.push_back(std::move(action));
    }
  }
  // Lowest member id first; ties fall through to the remaining members.
  const auto key = [](const Action& a) {
    auto members = a.members;
    std::sort(members.begin(), members.end());
    return members;
  };
  std::stable_sort(combines.begin(), combines.end(),
                   [&](const Action& a, const Action& b) { return key(a) < key(b); });
  std::stable_sort(splits.begin(), splits.end(),
                   [](const Action& a, const Action& b) { return a.composite < b.composite; });

  TransformOutcome outcome;
  decisions.accepted = std::move(rest);
  for (auto& action : combines) {
    try {
      outcome.formed.push_back(combine(system, action.members));
      decisions.accepted.push_back(std::move(action));
    } catch (const Error& error) {
      decisions.rejected.push_back(
          {action, format_action(action), std::string(to_string(error.code()))});
    }
  }
  for (auto& action : splits) {
    try {
      split(system, action.composite);
      outcome.dissolved.push_back(action.composite);
      decisions.accepted.push_back(std::move(action));
    } catch (const Error& error) {
      decisions.rejected.push_back(
          {action, format_action(action), std::string(to_string(error.code()))});
    }
  }
  return outcome;
}

}  // namespace cgot
