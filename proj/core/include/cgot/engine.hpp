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

#include <string>
#include <vector>

#include "cgot/composition.hpp"
#include "cgot/llm_backend.hpp"
#include "cgot/metrics.hpp"
#include "cgot/system_state.hpp"

namespace cgot {

struct EngineOptions {
  /// Issue a turn's inference calls concurrently. Peers then see only the
  /// previous turn's decisions. Meant for slow HTTP backends; tests and
  /// reproducible runs keep this off.
  bool concurrentInference = false;
};

/// Builds the initial system: one graph per inference unit seeded with the
/// agent's known conditions at turn 0.
SystemState initialize_system(EnvironmentState env, const std::vector<AgentState>& roster,
                              Mode mode, std::uint64_t seed, std::string scenarioHash = {});

/// A text Output node together with the agent that produced it.
struct IssuedOutput {
  AgentId issuer;
  NodeId node = 0;
  std::string text;
};

/// The Conclude layer: parses outputs, checks capability and environment
/// preconditions, and resolves exclusive-resource conflicts (one physical
/// action per body, packages, combine members, cleanings) in favour of the
/// lowest issuer id. A parse failure becomes an accepted Wait plus a
/// rejection; every other output lands in exactly one of accepted/rejected.
DecisionSet conclude(const std::vector<IssuedOutput>& outputs, const SystemState& system);

/// The view an inference unit gets this turn.
AgentView make_view(const SystemState& system, const AgentId& unit,
                    std::vector<std::string> peerDecisions);

/// One Inference -> Conclude -> Transformation -> Execution cycle.
/// Throws InvalidInput when every task is already complete.
void run_turn(SystemState& system, InferenceBackend& backend, const EngineOptions& options = {});

/// Runs turns until every task is complete or `maxTurns` turns have run.
/// Throws InvalidInput when maxTurns < 1.
RunReport run_to_completion(SystemState& system, InferenceBackend& backend, int maxTurns,
                            const EngineOptions& options = {});

RunReport make_report(const SystemState& system, int maxTurns);

}  // namespace cgot
