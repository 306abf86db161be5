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

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cgot/agents.hpp"
#include "cgot/world.hpp"

namespace cgot {

enum class InferenceRole {
  Standalone,  // an uncombined agent
  Composite,   // a CGoT composite reasoning for all its members
  Driver,      // GoT: the carrier deciding for the physical composite
  Passenger,   // GoT: a carried member with its own (redundant) inference
};

std::string_view to_string(InferenceRole role);

/// Everything one inference unit observes at the start of a turn.
struct AgentView {
  AgentId self;
  InferenceRole role = InferenceRole::Standalone;
  AgentState body;  // the physical unit being steered
  EnvironmentState env;
  Roster roster;
  std::vector<std::string> peerDecisions;  // "<agent>: <action>", this turn so far
  std::vector<ExternalEvent> recentEvents;  // applied during the previous turn
};

struct PolicyResult {
  std::vector<std::string> thoughts;
  std::vector<std::string> actions;
};

/// Resources other agents already claimed this turn.
struct PeerClaims {
  std::set<PackageId> packages;
  std::set<AgentId> agents;
  std::set<SiteId> cleanings;
};

PeerClaims claims_from(const std::vector<std::string>& peerDecisions);

/// Unblocked sites where `unit` has pending work given its capabilities:
/// open cleanings, open delivery targets, and sites holding packages it could
/// still pick up. The unit's own location is kept even when blocked.
std::vector<SiteId> task_sites(const EnvironmentState& env, const AgentState& unit,
                               const PeerClaims& claims);

/// Closest task site by map distance; ties go to the lowest site id.
std::optional<SiteId> nearest_task_site(const EnvironmentState& env, const AgentState& unit,
                                        const PeerClaims& claims);

/// Deterministic greedy stand-in for the language model. Rules, first match
/// wins:
///   1. complete a task step available at the current site;
///   2. a free vehicle picks up a colocated robot whose work is elsewhere;
///   3. a composite standing at one of its robots' task sites splits;
///   4. move toward the nearest task site;
///   5. wait.
/// A free robot that a colocated vehicle is about to pick up waits.
PolicyResult scripted_policy(const AgentView& view);

}  // namespace cgot
