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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cgot/action.hpp"
#include "cgot/types.hpp"

namespace cgot {

enum class Capability { CarryRobot, CarryPackage, CleanBuilding, DeliverInside, LongRange };
using CapabilitySet = std::set<Capability>;

std::string_view to_string(Capability capability);
std::optional<Capability> parse_capability(std::string_view text);

enum class AgentKind { EgoVehicle, RobotA, RobotB, Composite };

std::string_view to_string(AgentKind kind);
std::optional<AgentKind> parse_agent_kind(std::string_view text);

struct AgentSpec {
  AgentId id;
  AgentKind kind = AgentKind::EgoVehicle;
  CapabilitySet capabilities;
  int moveCostPerEdge = 1;  // turns per unit of edge cost

  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct Cargo {
  std::set<PackageId> packages;
  std::set<AgentId> agents;

  bool empty() const { return packages.empty() && agents.empty(); }
  friend bool operator==(const Cargo&, const Cargo&) = default;
};

/// Partial progress along one map edge.
struct Transit {
  SiteId towards;
  int progress = 0;

  friend bool operator==(const Transit&, const Transit&) = default;
};

struct AgentState {
  AgentSpec spec;
  SiteId location;
  Cargo cargo;
  bool active = true;               // false exactly while a composite member
  std::optional<AgentId> memberOf;
  std::optional<Transit> transit;

  const AgentId& id() const { return spec.id; }
  bool has(Capability capability) const { return spec.capabilities.contains(capability); }

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// Every agent ever created in a run, keyed (and therefore ordered) by id.
using Roster = std::map<AgentId, AgentState>;

CapabilitySet default_capabilities(AgentKind kind);
int default_move_cost(AgentKind kind);

AgentState make_agent(AgentId id, AgentKind kind, SiteId location);

/// V1, V2 (EgoVehicle), RA (RobotA), RB (RobotB), all idle at PackageSite.
std::vector<AgentState> make_default_roster();

bool is_robot(const AgentState& agent);

/// Capability and carried-cargo check for `action`, independent of the
/// environment (package positions, building flags and blocking are checked
/// by the world).
bool can_perform(const AgentState& agent, const Action& action);

}  // namespace cgot
