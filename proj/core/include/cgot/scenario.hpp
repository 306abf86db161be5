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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgot/agents.hpp"
#include "cgot/system_state.hpp"
#include "cgot/world.hpp"

namespace cgot {

struct RosterEntry {
  AgentId id;
  AgentKind kind = AgentKind::EgoVehicle;
  SiteId location;
  std::optional<CapabilitySet> capabilities;  // kind defaults when absent
  std::optional<int> moveCostPerEdge;
};

/// A scenario document: sites and edges, roster, tasks, scheduled events.
///
/// JSON schema (all keys but "sites", "roster" and "tasks" optional):
///   name      string
///   sites     [site id...]                 must contain "PackageSite"
///   edges     [[a, b, cost?]...]           default: complete graph, cost 1
///   roster    [{id, kind, location, capabilities?, moveCostPerEdge?}...]
///   tasks     [{kind: Clean|Deliver, target, package?}...]
///   events    [{kind, atTurn, building?|agent?|task?|text?}...]
///   maxTurns  integer >= 1                 default 50
///   seed      unsigned integer             default 7
struct ScenarioConfig {
  std::string name;
  std::vector<SiteId> sites;
  std::vector<SiteEdge> edges;
  std::vector<RosterEntry> roster;
  std::vector<TaskSpec> tasks;
  std::vector<ExternalEvent> events;
  int maxTurns = 50;
  std::uint64_t seed = 7;
  std::string hash;  // digest of the canonical document
};

std::string_view default_scenario_document();

/// Throws ValidationError with the offending field path.
ScenarioConfig parse_scenario(const nlohmann::json& doc);

/// "default" loads the embedded scenario; anything else is a file path.
/// Throws NotFound for a missing file, ValidationError for bad content.
ScenarioConfig load_scenario(const std::string& path_or_name);

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string stable_digest(std::string_view text);

std::vector<AgentState> build_roster(const ScenarioConfig& scenario);
EnvironmentState build_environment(const ScenarioConfig& scenario);

SystemState make_system(const ScenarioConfig& scenario, Mode mode,
                        std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace cgot
