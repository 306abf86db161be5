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

#include "cgot/scripted_policy.hpp"

#include <algorithm>

#include "cgot/text.hpp"

namespace cgot {
namespace {

bool open_delivery_for(const EnvironmentState& env, const PackageId& package) {
  return std::any_of(env.tasks.begin(), env.tasks.end(), [&](const TaskSpec& t) {
    return t.kind == TaskKind::Deliver && !t.completed && t.package == package;
  });
}

std::optional<SiteId> delivery_target(const EnvironmentState& env, const PackageId& package) {
  for (const auto& task : env.tasks) {
    if (task.kind == TaskKind::Deliver && !task.completed && task.package == package) {
      return task.target;
    }
  }
  return std::nullopt;
}

bool is_free_vehicle(const EnvironmentState& env, const Roster& roster, const AgentState& agent) {
  return agent.active && agent.spec.kind != AgentKind::Composite &&
         agent.has(Capability::CarryRobot) && !is_disabled(env, roster, agent);
}

bool is_free_robot(const EnvironmentState& env, const Roster& roster, const AgentState& agent) {
  return agent.active && is_robot(agent) && !is_disabled(env, roster, agent);
}

std::string wait_text() { return format_action(make_wait("")); }

std::string pending_summary(const EnvironmentState& env) {
  std::vector<std::string> parts;
  for (const auto& task : env.tasks) {
    if (task.completed) continue;
    parts.push_back(std::string(to_string(task.kind)) + "(" + task.target + ")");
  }
  return parts.empty() ? "none" : join(parts, ", ");
}

/// Rule 1. Returns the action text for a task step at the unit's site.
std::optional<std::string> local_step(const EnvironmentState& env, const AgentState& unit,
                                      const PeerClaims& claims) {
  const SiteId& here = unit.location;
  Action action;
  for (const auto& package : unit.cargo.packages) {
    if (delivery_target(env, package) == here && env.buildings.contains(here)) {
      action.kind = ActionKind::DropPackage;
      action.package = package;
      return format_action(action);
    }
  }
  if (unit.has(Capability::DeliverInside)) {
    const auto building = env.buildings.find(here);
    if (building != env.buildings.end() && building->second.deliveryStage1Done) {
      for (const auto& [package, where] : env.packages) {
        if (where == PackageLocation::entrance(here) && delivery_target(env, package) == here &&
            !claims.packages.contains(package)) {
          action.kind = ActionKind::CarryInside;
          action.package = package;
          action.site = here;
          return format_action(action);
        }
      }
    }
  }
  if (unit.has(Capability::CleanBuilding) && !claims.cleanings.contains(here)) {
    for (const auto& task : env.tasks) {
      if (task.kind == TaskKind::Clean && !task.completed && task.target == here) {
        action.kind = ActionKind::Clean;
        action.site = here;
        return format_action(action);
      }
    }
  }
  if (unit.has(Capability::CarryPackage)) {
    for (const auto& [package, where] : env.packages) {
      if (where == PackageLocation::at_site(here) && open_delivery_for(env, package) &&
          !claims.packages.contains(package)) {
        action.kind = ActionKind::PickupPackage;
        action.package = package;
        return format_action(action);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(InferenceRole role) {
  switch (role) {
    case InferenceRole::Standalone: return "standalone";
    case InferenceRole::Composite: return "composite";
    case InferenceRole::Driver: return "driver";
    case InferenceRole::Passenger: return "passenger";
  }
  return "standalone";
}

PeerClaims claims_from(const std::vector<std::string>& peerDecisions) {
  PeerClaims claims;
  for (const auto& line : peerDecisions) {
    const auto colon = line.find(':');
    const std::string_view text =
        colon == std::string::npos ? std::string_view(line) : std::string_view(line).substr(colon + 1);
    const auto parsed = parse_action(text);
    const auto* action = std::get_if<Action>(&parsed);
    if (action == nullptr) continue;
    switch (action->kind) {
      case ActionKind::PickupPackage:
      case ActionKind::CarryInside: claims.packages.insert(action->package); break;
      case ActionKind::Combine:
        claims.agents.insert(action->members.begin(), action->members.end());
        break;
      case ActionKind::Clean: claims.cleanings.insert(action->site); break;
      default: break;
    }
  }
  return claims;
}

std::vector<SiteId> task_sites(const EnvironmentState& env, const AgentState& unit,
                               const PeerClaims& claims) {
  std::set<SiteId> sites;
  for (const auto& task : env.tasks) {
    if (task.completed) continue;
    if (task.kind == TaskKind::Clean && unit.has(Capability::CleanBuilding)) {
      sites.insert(task.target);
    }
    if (task.kind == TaskKind::Deliver && unit.has(Capability::DeliverInside)) {
      sites.insert(task.target);
    }
  }
  if (unit.has(Capability::CarryPackage)) {
    for (const auto& package : unit.cargo.packages) {
      if (auto target = delivery_target(env, package)) sites.insert(*target);
    }
    for (const auto& [package, where] : env.packages) {
      if (where.where == PackageLocation::Where::AtSite && open_delivery_for(env, package) &&
          !claims.packages.contains(package)) {
        sites.insert(where.ref);
      }
    }
  }
  std::vector<SiteId> out;
  for (const auto& site : sites) {
    if (site == unit.location || !env.map.is_blocked(site)) out.push_back(site);
  }
  return out;
}

std::optional<SiteId> nearest_task_site(const EnvironmentState& env, const AgentState& unit,
                                        const PeerClaims& claims) {
  std::optional<SiteId> best;
  int best_distance = 0;
  for (const auto& site : task_sites(env, unit, claims)) {
    const auto distance = env.map.distance(unit.location, site);
    if (!distance) continue;
    // task_sites is sorted, so strict < keeps the lowest id on ties.
    if (!best || *distance < best_distance) {
      best = site;
      best_distance = *distance;
    }
  }
  return best;
}

PolicyResult scripted_policy(const AgentView& view) {
  PolicyResult result;
  const AgentState& unit = view.body;
  const EnvironmentState& env = view.env;
  const PeerClaims claims = claims_from(view.peerDecisions);

  result.thoughts.push_back("at " + unit.location + "; pending " + pending_summary(env));
  const auto decide = [&result](std::string why, std::string action) {
    result.thoughts.push_back(std::move(why));
    result.actions.push_back(std::move(action));
    return result;
  };

  if (view.role == InferenceRole::Passenger) {
    return decide("carried by " + unit.id() + "; the carrier steers", wait_text());
  }
  if (is_disabled(env, view.roster, unit)) return decide("disabled", wait_text());
  if (env.tasks.empty() || all_tasks_complete(env)) return decide("all tasks complete", wait_text());

  if (auto step = local_step(env, unit, claims)) return decide("task step available here", *step);

  // Rule 2: give a robot with remote work a ride.
  if (is_free_vehicle(env, view.roster, unit)) {
    for (const auto& [id, other] : view.roster) {
      if (id == unit.id() || other.location != unit.location) continue;
      if (!is_free_robot(env, view.roster, other) || claims.agents.contains(id)) continue;
      const auto target = nearest_task_site(env, other, claims);
      if (!target || *target == other.location) continue;
      Action combine;
      combine.kind = ActionKind::Combine;
      combine.members = {unit.id(), id};
      return decide(id + " has work at " + *target + "; carry it", format_action(combine));
    }
  }

  // A robot with remote work waits for a colocated vehicle to collect it.
  if (is_free_robot(env, view.roster, unit) && unit.spec.kind != AgentKind::Composite) {
    const auto target = nearest_task_site(env, unit, claims);
    if (target && *target != unit.location) {
      for (const auto& [id, other] : view.roster) {
        if (other.location == unit.location && is_free_vehicle(env, view.roster, other)) {
          return decide("waiting for a ride from " + id, wait_text());
        }
      }
    }
  }

  // Rule 3.
  if (unit.spec.kind == AgentKind::Composite) {
    for (const auto& member_id : unit.cargo.agents) {
      const auto member = view.roster.find(member_id);
      if (member == view.roster.end() || !is_robot(member->second)) continue;
      AgentState robot = member->second;
      robot.location = unit.location;
      const auto sites = task_sites(env, robot, claims);
      if (std::find(sites.begin(), sites.end(), unit.location) != sites.end()) {
        Action split;
        split.kind = ActionKind::Split;
        split.composite = unit.id();
        return decide(member_id + " has work here; release it", format_action(split));
      }
    }
  }

  if (const auto target = nearest_task_site(env, unit, claims)) {
    if (*target == unit.location) return decide("holding for work at " + *target, wait_text());
    Action move;
    move.kind = ActionKind::Move;
    move.site = *target;
    return decide("nearest task site " + *target, format_action(move));
  }
  return decide("no reachable pending task", wait_text());
}

}  // namespace cgot
