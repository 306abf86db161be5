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

#include "cgot/agents.hpp"

#include <algorithm>

#include "cgot/text.hpp"

namespace cgot {

std::string_view to_string(Capability capability) {
  switch (capability) {
    case Capability::CarryRobot: return "CarryRobot";
    case Capability::CarryPackage: return "CarryPackage";
    case Capability::CleanBuilding: return "CleanBuilding";
    case Capability::DeliverInside: return "DeliverInside";
    case Capability::LongRange: return "LongRange";
  }
  return "LongRange";
}

std::optional<Capability> parse_capability(std::string_view text) {
  for (Capability c : {Capability::CarryRobot, Capability::CarryPackage, Capability::CleanBuilding,
                       Capability::DeliverInside, Capability::LongRange}) {
    if (iequals(text, to_string(c))) return c;
  }
  return std::nullopt;
}

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::EgoVehicle: return "EgoVehicle";
    case AgentKind::RobotA: return "RobotA";
    case AgentKind::RobotB: return "RobotB";
    case AgentKind::Composite: return "Composite";
  }
  return "Composite";
}

std::optional<AgentKind> parse_agent_kind(std::string_view text) {
  for (AgentKind k :
       {AgentKind::EgoVehicle, AgentKind::RobotA, AgentKind::RobotB, AgentKind::Composite}) {
    if (iequals(text, to_string(k))) return k;
  }
  return std::nullopt;
}

CapabilitySet default_capabilities(AgentKind kind) {
  switch (kind) {
    case AgentKind::EgoVehicle:
      return {Capability::CarryRobot, Capability::CarryPackage, Capability::LongRange};
    case AgentKind::RobotA: return {Capability::DeliverInside};
    case AgentKind::RobotB: return {Capability::CleanBuilding};
    case AgentKind::Composite: return {};
  }
  return {};
}

int default_move_cost(AgentKind kind) {
  return kind == AgentKind::RobotA || kind == AgentKind::RobotB ? 3 : 1;
}

AgentState make_agent(AgentId id, AgentKind kind, SiteId location) {
  AgentState agent;
  agent.spec = AgentSpec{std::move(id), kind, default_capabilities(kind), default_move_cost(kind)};
  agent.location = std::move(location);
  return agent;
}

std::vector<AgentState> make_default_roster() {
  const SiteId start(kPackageSite);
  return {make_agent("V1", AgentKind::EgoVehicle, start),
          make_agent("V2", AgentKind::EgoVehicle, start),
          make_agent("RA", AgentKind::RobotA, start), make_agent("RB", AgentKind::RobotB, start)};
}

bool is_robot(const AgentState& agent) {
  return agent.spec.kind == AgentKind::RobotA || agent.spec.kind == AgentKind::RobotB;
}

bool can_perform(const AgentState& agent, const Action& action) {
  switch (action.kind) {
    case ActionKind::Wait: return true;
    case ActionKind::Move: return agent.active && !action.site.empty();
    case ActionKind::PickupPackage: return agent.has(Capability::CarryPackage);
    case ActionKind::DropPackage:
      return agent.has(Capability::CarryPackage) && agent.cargo.packages.contains(action.package);
    case ActionKind::CarryInside:
      return agent.has(Capability::DeliverInside) && agent.location == action.site;
    case ActionKind::Clean:
      return agent.has(Capability::CleanBuilding) && agent.location == action.site;
    case ActionKind::Combine:
      return agent.active && agent.spec.kind != AgentKind::Composite &&
             std::find(action.members.begin(), action.members.end(), agent.id()) !=
                 action.members.end();
    case ActionKind::Split:
      return agent.spec.kind == AgentKind::Composite && agent.id() == action.composite;
  }
  return false;
}

}  // namespace cgot
