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

#include "cgot/action.hpp"

#include <array>
#include <utility>

#include "cgot/text.hpp"

namespace cgot {
namespace {

struct KindInfo {
  ActionKind kind;
  std::string_view name;
  int arity;  // -1: two or more
};

constexpr std::array<KindInfo, 8> kKinds{{
    {ActionKind::Move, "Move", 1},
    {ActionKind::PickupPackage, "PickupPackage", 1},
    {ActionKind::DropPackage, "DropPackage", 1},
    {ActionKind::CarryInside, "CarryInside", 2},
    {ActionKind::Clean, "Clean", 1},
    {ActionKind::Combine, "Combine", -1},
    {ActionKind::Split, "Split", 1},
    {ActionKind::Wait, "Wait", 0},
}};

}  // namespace

std::string_view to_string(ActionKind kind) {
  for (const auto& info : kKinds) {
    if (info.kind == kind) return info.name;
  }
  return "Wait";
}

Action make_wait(AgentId actor) {
  Action action;
  action.kind = ActionKind::Wait;
  action.issuer = actor;
  action.actor = std::move(actor);
  return action;
}

std::string format_action(const Action& action) {
  const std::string name(to_string(action.kind));
  switch (action.kind) {
    case ActionKind::Move:
    case ActionKind::Clean: return name + "(" + action.site + ")";
    case ActionKind::PickupPackage:
    case ActionKind::DropPackage: return name + "(" + action.package + ")";
    case ActionKind::CarryInside: return name + "(" + action.package + "," + action.site + ")";
    case ActionKind::Combine: return name + "(" + join(action.members, ",") + ")";
    case ActionKind::Split: return name + "(" + action.composite + ")";
    case ActionKind::Wait: return name;
  }
  return name;
}

ParseResult parse_action(std::string_view text) {
  const std::string original(text);
  const std::string_view body = trim(text);
  const auto open = body.find('(');
  const std::string_view name = trim(body.substr(0, open));
  std::vector<std::string> params;
  if (open != std::string_view::npos) {
    if (body.back() != ')') return ParseFailure{original, "missing closing parenthesis"};
    const std::string_view inner = trim(body.substr(open + 1, body.size() - open - 2));
    if (!inner.empty()) {
      for (const auto& part : split(inner, ',')) {
        const std::string_view param = trim(part);
        if (param.empty()) return ParseFailure{original, "empty parameter"};
        params.emplace_back(param);
      }
    }
  }

  const KindInfo* info = nullptr;
  for (const auto& candidate : kKinds) {
    if (iequals(name, candidate.name)) info = &candidate;
  }
  if (info == nullptr) return ParseFailure{original, "unknown action kind"};
  if (open == std::string_view::npos && info->kind != ActionKind::Wait) {
    return ParseFailure{original, "missing parameter list"};
  }
  const bool arity_ok = info->arity < 0 ? params.size() >= 2
                                        : params.size() == static_cast<std::size_t>(info->arity);
  if (!arity_ok) return ParseFailure{original, "arity mismatch"};

  Action action;
  action.kind = info->kind;
  switch (action.kind) {
    case ActionKind::Move:
    case ActionKind::Clean: action.site = params[0]; break;
    case ActionKind::PickupPackage:
    case ActionKind::DropPackage: action.package = params[0]; break;
    case ActionKind::CarryInside:
      action.package = params[0];
      action.site = params[1];
      break;
    case ActionKind::Combine: action.members = params; break;
    case ActionKind::Split: action.composite = params[0]; break;
    case ActionKind::Wait: break;
  }
  return action;
}

}  // namespace cgot
