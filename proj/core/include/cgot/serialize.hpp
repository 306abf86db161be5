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

// JSON documents for snapshots, per-turn logs and the control plane.

#include <string>

#include <nlohmann/json.hpp>

#include "cgot/system_state.hpp"

namespace cgot {

nlohmann::json to_json(const ThoughtGraph& graph);

/// Unchecked: the result may violate DAG rules, so run validate() on it.
/// Throws ValidationError on a structurally malformed document.
ThoughtGraph graph_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const AgentState& agent);
nlohmann::json to_json(const EnvironmentState& env);
nlohmann::json to_json(const ExternalEvent& event);
nlohmann::json to_json(const Action& action);
nlohmann::json to_json(const CompositionRecord& record);
nlohmann::json to_json(const TurnLog& log);

/// Throws ValidationError naming the offending field under `path`.
ExternalEvent event_from_json(const nlohmann::json& doc, const std::string& path = "event");

/// Environment, agents and composition history; compact and key-sorted, so
/// identical states serialize byte-identically.
nlohmann::json final_state_to_json(const SystemState& system);

}  // namespace cgot
