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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cgot/thought_graph.hpp"
#include "cgot/types.hpp"

namespace cgot {

enum class ActionKind { Move, PickupPackage, DropPackage, CarryInside, Clean, Combine, Split, Wait };

std::string_view to_string(ActionKind kind);

/// One decision. `actor` is the physical body that executes it; `issuer` is
/// the agent whose Output node produced it. They differ only for a carrier
/// deciding on behalf of its composite in GoT mode.
struct Action {
  ActionKind kind = ActionKind::Wait;
  AgentId actor;
  AgentId issuer;
  SiteId site;                   // Move, CarryInside, Clean
  PackageId package;             // PickupPackage, DropPackage, CarryInside
  std::vector<AgentId> members;  // Combine
  AgentId composite;             // Split
  NodeId source = 0;             // Output node this action came from; 0 if synthesized

  friend bool operator==(const Action&, const Action&) = default;
};

Action make_wait(AgentId actor);

/// Canonical text, e.g. "Move(B1)", "CarryInside(p1,B1)", "Wait".
std::string format_action(const Action& action);

struct ParseFailure {
  std::string text;
  std::string reason;
};

using ParseResult = std::variant<Action, ParseFailure>;

/// Grammar: KIND '(' params ')' with a case-insensitive kind. Wait may omit
/// the parentheses. The returned action has no actor; the caller assigns it.
ParseResult parse_action(std::string_view text);

struct Rejection {
  Action action;
  std::string text;
  std::string reason;
};

/// Validated, conflict-free decisions for one turn.
struct DecisionSet {
  int turn = 0;
  std::vector<Action> accepted;
  std::vector<Rejection> rejected;
};

}  // namespace cgot
