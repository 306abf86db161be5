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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cgot/action.hpp"
#include "cgot/agents.hpp"
#include "cgot/metrics.hpp"
#include "cgot/thought_graph.hpp"
#include "cgot/types.hpp"
#include "cgot/world.hpp"

namespace cgot {

struct CompositionRecord {
  AgentId compositeId;
  std::vector<AgentId> members;
  int formedAtTurn = 0;
  std::optional<int> dissolvedAtTurn;
  std::map<AgentId, ThoughtGraph> memberGraphSnapshots;  // empty in GoT mode

  bool live() const { return !dissolvedAtTurn.has_value(); }
};

struct UsageEntry {
  AgentId agentId;
  std::uint64_t promptTokens = 0;
  std::uint64_t completionTokens = 0;
};

struct LocationChange {
  AgentId agent;
  SiteId from;
  SiteId to;
};

/// Structured record of one Inference -> Conclude -> Execution cycle.
struct TurnLog {
  int turn = 0;
  std::vector<AgentId> inferenceUnits;
  std::vector<UsageEntry> usage;
  std::vector<std::string> substitutions;  // backend fallbacks, "agent: reason"
  std::vector<Action> accepted;
  std::vector<Rejection> rejected;
  std::vector<AgentId> compositesFormed;
  std::vector<AgentId> compositesDissolved;
  std::vector<ExternalEvent> eventsApplied;
  std::vector<std::pair<ExternalEvent, std::string>> eventsRejected;
  std::vector<Arrival> arrivals;
  std::vector<LocationChange> moves;
  std::vector<std::string> flagChanges;   // e.g. "B1.cleaned"
  std::vector<std::string> packageMoves;  // e.g. "p1: PackageSite -> carriedBy(V1)"
  bool compositionLive = false;           // a composite existed when inference ran
};

/// Run-time instantiation of the system: graphs, agents, environment,
/// composition history, token ledger and the per-turn log.
struct SystemState {
  Roster agents;
  std::map<AgentId, ThoughtGraph> graphs;  // keyed by inference unit
  EnvironmentState env;
  std::vector<CompositionRecord> compositions;
  Mode mode = Mode::CGoT;
  TokenLedger ledger;
  std::uint64_t seed = 0;
  NodeIdAllocator nodeIds;
  int nextCompositeIndex = 1;
  std::size_t initialRosterSize = 0;
  std::string scenarioHash;
  std::vector<ExternalEvent> lastEvents;  // applied during the previous turn
  std::vector<TurnLog> log;
};

const CompositionRecord* find_live_composition(const SystemState& system, const AgentId& id);

/// Agents that issue an inference call this turn, in id order.
/// CGoT: active, non-disabled agents (a composite counts once).
/// GoT: non-disabled original agents, carried or not.
std::vector<AgentId> inference_units(const SystemState& system);

/// The body that executes decisions issued by `agent`: its composite if it is
/// carried, itself otherwise.
const AgentState& body_of(const SystemState& system, const AgentId& agent);

}  // namespace cgot
