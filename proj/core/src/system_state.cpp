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

#include "cgot/system_state.hpp"

namespace cgot {

const CompositionRecord* find_live_composition(const SystemState& system, const AgentId& id) {
  for (const auto& record : system.compositions) {
    if (record.compositeId == id && record.live()) return &record;
  }
  return nullptr;
}

std::vector<AgentId> inference_units(const SystemState& system) {
  std::vector<AgentId> units;
  for (const auto& [id, agent] : system.agents) {
    if (system.mode == Mode::CGoT) {
      if (agent.active && !is_disabled(system.env, system.agents, agent)) units.push_back(id);
    } else if (agent.spec.kind != AgentKind::Composite && !system.env.disabled.contains(id)) {
      units.push_back(id);
    }
  }
  return units;
}

const AgentState& body_of(const SystemState& system, const AgentId& agent) {
  const AgentState& state = system.agents.at(agent);
  if (state.memberOf) return body_of(system, *state.memberOf);
  return state;
}

}  // namespace cgot
