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

#include <vector>

#include "cgot/system_state.hpp"

namespace cgot {

/// Replaces the colocated `members` with a new composite agent "C<k>".
///
/// The composite holds the union of member capabilities, the cheapest member
/// move cost, and every member's package cargo. In CGoT mode the member
/// graphs are merged into one graph owned by the composite: their disjoint
/// union plus a CompositionMarker node fed by each member's latest Output
/// (latest Initial if it has none). In GoT mode the combination is physical
/// only and member graphs stay untouched.
///
/// Throws InvalidInput (fewer than two distinct known members, or a robot
/// without a carrier), AlreadyCombined, or NotColocated.
AgentId combine(SystemState& system, std::vector<AgentId> members);

/// Dissolves a live composite and reactivates its members at the
/// composite's location. Packages go back to the lowest-id member that can
/// carry them. In CGoT mode each member gets its formation-time graph back
/// plus a SplitMarker summarising the composite's outputs.
///
/// Throws UnknownComposite.
std::vector<AgentId> split(SystemState& system, const AgentId& compositeId);

struct TransformOutcome {
  std::vector<AgentId> formed;
  std::vector<AgentId> dissolved;
};

/// Executes accepted Combine actions (ordered by lowest member id), then
/// Split actions (ordered by composite id). Failures move from
/// decisions.accepted to decisions.rejected.
TransformOutcome apply_transformations(SystemState& system, DecisionSet& decisions);

}  // namespace cgot
