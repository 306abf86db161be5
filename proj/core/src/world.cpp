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

#include "cgot/world.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>

#include "cgot/error.hpp"
#include "cgot/text.hpp"

namespace cgot {
namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max();

bool has_open_delivery(const EnvironmentState& env, const PackageId& package, const SiteId& target) {
  return std::any_of(env.tasks.begin(), env.tasks.end(), [&](const TaskSpec& task) {
    return task.kind == TaskKind::Deliver && !task.completed && task.package == package &&
           task.target == target;
  });
}

bool has_open_cleaning(const EnvironmentState& env, const SiteId& target) {
  return std::any_of(env.tasks.begin(), env.tasks.end(), [&](const TaskSpec& task) {
    return task.kind == TaskKind::Clean && !task.completed && task.target == target;
  });
}

PackageId fresh_package_id(EnvironmentState& env) {
  while (true) {
    PackageId id = "p" + std::to_string(env.nextPackageIndex++);
    if (!env.packages.contains(id)) return id;
  }
}

void reject_event(const ExternalEvent& event, const std::string& why) {
  throw Error(ErrorCode::EventRejected, describe(event) + ": " + why);
}

void set_location(Roster& roster, const AgentId& id, const SiteId& site,
                  std::vector<Arrival>& arrivals) {
  auto& agent = roster.at(id);
  agent.location = site;
  agent.transit.reset();
  arrivals.push_back({id, site});
  for (const auto& passenger : agent.cargo.agents) set_location(roster, passenger, site, arrivals);
}

}  // namespace

SiteMap::SiteMap(std::vector<SiteId> sites, std::vector<SiteEdge> edges)
    : sites_(std::move(sites)), edges_(std::move(edges)) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
}

SiteMap SiteMap::complete(std::vector<SiteId> sites) {
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  std::vector<SiteEdge> edges;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) edges.push_back({sites[i], sites[j], 1});
  }
  return SiteMap(std::move(sites), std::move(edges));
}

bool SiteMap::has_site(std::string_view site) const {
  return std::binary_search(sites_.begin(), sites_.end(), site,
                            [](const auto& a, const auto& b) { return std::string_view(a) < std::string_view(b); });
}

std::map<SiteId, int> SiteMap::distances_from(const SiteId& origin) const {
  std::map<SiteId, int> dist;
  for (const auto& site : sites_) dist[site] = kUnreachable;
  if (!dist.contains(origin)) return dist;
  using Entry = std::pair<int, SiteId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  dist[origin] = 0;
  frontier.push({0, origin});
  while (!frontier.empty()) {
    const auto [d, site] = frontier.top();
    frontier.pop();
    if (d > dist[site]) continue;
    for (const auto& edge : edges_) {
      const SiteId* other = nullptr;
      if (edge.a == site) other = &edge.b;
      if (edge.b == site) other = &edge.a;
      if (other == nullptr || is_blocked(*other) || !dist.contains(*other)) continue;
      if (d + edge.cost < dist[*other]) {
        dist[*other] = d + edge.cost;
        frontier.push({dist[*other], *other});
      }
    }
  }
  return dist;
}

bool SiteMap::connected() const {
  if (sites_.empty()) return true;
  SiteMap open(sites_, edges_);
  const auto dist = open.distances_from(sites_.front());
  return std::all_of(dist.begin(), dist.end(),
                     [](const auto& entry) { return entry.second != kUnreachable; });
}

std::optional<SiteMap::Hop> SiteMap::next_hop(const SiteId& from, const SiteId& to) const {
  if (from == to || !has_site(from) || !has_site(to) || is_blocked(to)) return std::nullopt;
  const auto to_target = distances_from(to);
  std::optional<Hop> best;
  int best_total = kUnreachable;
  for (const auto& edge : edges_) {
    const SiteId* other = nullptr;
    if (edge.a == from) other = &edge.b;
    if (edge.b == from) other = &edge.a;
    if (other == nullptr || is_blocked(*other)) continue;
    const int rest = to_target.at(*other);
    if (rest == kUnreachable) continue;
    const int total = edge.cost + rest;
    if (total < best_total || (total == best_total && best && *other < best->site)) {
      best_total = total;
      best = Hop{*other, edge.cost};
    }
  }
  return best;
}

std::optional<int> SiteMap::distance(const SiteId& from, const SiteId& to) const {
  if (from == to) return has_site(from) ? std::optional<int>(0) : std::nullopt;
  if (!has_site(from) || !has_site(to) || is_blocked(to)) return std::nullopt;
  const auto to_target = distances_from(to);
  int best = kUnreachable;
  for (const auto& edge : edges_) {
    const SiteId* other = nullptr;
    if (edge.a == from) other = &edge.b;
    if (edge.b == from) other = &edge.a;
    if (other == nullptr || is_blocked(*other)) continue;
    const int rest = to_target.at(*other);
    if (rest != kUnreachable) best = std::min(best, edge.cost + rest);
  }
  if (best == kUnreachable) return std::nullopt;
  return best;
}

std::string_view to_string(TaskKind kind) { return kind == TaskKind::Clean ? "Clean" : "Deliver"; }

std::optional<TaskKind> parse_task_kind(std::string_view text) {
  if (iequals(text, "clean")) return TaskKind::Clean;
  if (iequals(text, "deliver")) return TaskKind::Deliver;
  return std::nullopt;
}

std::string to_string(const PackageLocation& location) {
  switch (location.where) {
    case PackageLocation::Where::AtSite: return location.ref;
    case PackageLocation::Where::Entrance: return "entrance(" + location.ref + ")";
    case PackageLocation::Where::Inside: return "inside(" + location.ref + ")";
    case PackageLocation::Where::CarriedBy: return "carriedBy(" + location.ref + ")";
  }
  return location.ref;
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::BuildingBlocked: return "BuildingBlocked";
    case EventKind::BuildingUnblocked: return "BuildingUnblocked";
    case EventKind::NewTask: return "NewTask";
    case EventKind::AgentDisabled: return "AgentDisabled";
    case EventKind::AgentEnabled: return "AgentEnabled";
    case EventKind::HumanInstruction: return "HumanInstruction";
  }
  return "HumanInstruction";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (EventKind k : {EventKind::BuildingBlocked, EventKind::BuildingUnblocked, EventKind::NewTask,
                      EventKind::AgentDisabled, EventKind::AgentEnabled,
                      EventKind::HumanInstruction}) {
    if (iequals(text, to_string(k))) return k;
  }
  return std::nullopt;
}

std::string describe(const ExternalEvent& event) {
  std::string out(to_string(event.kind));
  switch (event.kind) {
    case EventKind::BuildingBlocked:
    case EventKind::BuildingUnblocked: return out + "(" + event.building + ")";
    case EventKind::NewTask:
      return out + "(" + std::string(to_string(event.taskKind)) + "," + event.building + ")";
    case EventKind::AgentDisabled:
    case EventKind::AgentEnabled: return out + "(" + event.agent + ")";
    case EventKind::HumanInstruction: return out + "(\"" + event.instruction + "\")";
  }
  return out;
}

std::vector<TaskSpec> EnvironmentState::pending_tasks() const {
  std::vector<TaskSpec> pending;
  std::copy_if(tasks.begin(), tasks.end(), std::back_inserter(pending),
               [](const TaskSpec& task) { return !task.completed; });
  return pending;
}

std::optional<ExternalEvent> translate_instruction(const EnvironmentState& env,
                                                   const ExternalEvent& event) {
  const auto words = split(trim(to_lower(event.instruction)), ' ');
  std::vector<std::string> tokens;
  for (const auto& word : words) {
    if (!trim(word).empty()) tokens.emplace_back(trim(word));
  }
  if (tokens.size() != 2) return std::nullopt;
  const auto kind = parse_task_kind(tokens[0]);
  if (!kind) return std::nullopt;
  for (const auto& [id, building] : env.buildings) {
    if (iequals(id, tokens[1])) {
      ExternalEvent task = event;
      task.kind = EventKind::NewTask;
      task.taskKind = *kind;
      task.building = id;
      return task;
    }
  }
  return std::nullopt;
}

void check_event(const EnvironmentState& env, const Roster& roster, const ExternalEvent& event) {
  if (event.atTurn < 0) reject_event(event, "negative turn");
  switch (event.kind) {
    case EventKind::BuildingBlocked:
    case EventKind::BuildingUnblocked:
    case EventKind::NewTask:
      if (!env.buildings.contains(event.building)) reject_event(event, "unknown building");
      break;
    case EventKind::AgentDisabled:
    case EventKind::AgentEnabled:
      if (!roster.contains(event.agent)) reject_event(event, "unknown agent");
      break;
    case EventKind::HumanInstruction:
      if (!translate_instruction(env, event)) {
        reject_event(event, "expected \"clean <building>\" or \"deliver <building>\"");
      }
      break;
  }
}

EnvironmentState apply_event(EnvironmentState env, const Roster& roster,
                             const ExternalEvent& event) {
  check_event(env, roster, event);
  switch (event.kind) {
    case EventKind::BuildingBlocked: env.map.block(event.building); break;
    case EventKind::BuildingUnblocked: env.map.unblock(event.building); break;
    case EventKind::NewTask: {
      TaskSpec task{event.taskKind, event.building, std::nullopt, false};
      if (event.taskKind == TaskKind::Deliver) {
        const PackageId id = fresh_package_id(env);
        env.packages[id] = PackageLocation::at_site(SiteId(kPackageSite));
        task.package = id;
      } else {
        env.buildings[event.building].needsCleaning = true;
      }
      env.tasks.push_back(std::move(task));
      break;
    }
    case EventKind::AgentDisabled: env.disabled.insert(event.agent); break;
    case EventKind::AgentEnabled: env.disabled.erase(event.agent); break;
    case EventKind::HumanInstruction:
      return apply_event(std::move(env), roster, *translate_instruction(env, event));
  }
  return env;
}

std::vector<ExternalEvent> take_due_events(EnvironmentState& env, int turn) {
  std::vector<ExternalEvent> due;
  std::vector<ExternalEvent> later;
  for (auto& event : env.eventQueue) {
    (event.atTurn <= turn ? due : later).push_back(std::move(event));
  }
  env.eventQueue = std::move(later);
  return due;
}

bool is_disabled(const EnvironmentState& env, const Roster& roster, const AgentState& body) {
  if (env.disabled.contains(body.id())) return true;
  for (const auto& member : body.cargo.agents) {
    const auto it = roster.find(member);
    if (it != roster.end() && is_disabled(env, roster, it->second)) return true;
  }
  return false;
}

std::optional<std::string> check_action(const EnvironmentState& env, const Roster& roster,
                                        const AgentState& body, const Action& action) {
  if (action.kind == ActionKind::Wait || action.kind == ActionKind::Combine ||
      action.kind == ActionKind::Split) {
    return std::nullopt;
  }
  if (!body.active) return "carried";
  if (is_disabled(env, roster, body)) return "disabled";

  switch (action.kind) {
    case ActionKind::Move: {
      if (!env.map.has_site(action.site)) return "unknown-site";
      if (action.site == body.location) return std::nullopt;
      if (env.map.is_blocked(action.site)) return "blocked";
      if (!env.map.next_hop(body.location, action.site)) return "unreachable";
      return std::nullopt;
    }
    case ActionKind::PickupPackage: {
      const auto it = env.packages.find(action.package);
      if (it == env.packages.end()) return "unknown-package";
      const auto& where = it->second;
      if (where.ref != body.location) return "package-not-here";
      if (where.where == PackageLocation::Where::AtSite) return std::nullopt;
      if (where.where == PackageLocation::Where::Entrance &&
          !has_open_delivery(env, action.package, body.location)) {
        return std::nullopt;
      }
      return "package-not-here";
    }
    case ActionKind::DropPackage:
      if (!body.cargo.packages.contains(action.package)) return "not-carrying";
      return std::nullopt;
    case ActionKind::CarryInside: {
      const auto building = env.buildings.find(action.site);
      if (building == env.buildings.end()) return "unknown-building";
      if (body.location != action.site) return "not-at-site";
      const auto it = env.packages.find(action.package);
      if (it == env.packages.end()) return "unknown-package";
      if (!building->second.deliveryStage1Done ||
          it->second != PackageLocation::entrance(action.site)) {
        return "package-not-at-entrance";
      }
      if (!has_open_delivery(env, action.package, action.site)) return "no-delivery-task";
      return std::nullopt;
    }
    case ActionKind::Clean:
      if (!env.buildings.contains(action.site)) return "unknown-building";
      if (body.location != action.site) return "not-at-site";
      if (!has_open_cleaning(env, action.site)) return "nothing-to-clean";
      return std::nullopt;
    default: return std::nullopt;
  }
}

StepOutcome step_environment(const EnvironmentState& env, const Roster& roster,
                             const DecisionSet& decisions, std::span<const ExternalEvent> events) {
  StepOutcome out{env, roster, {}, {}, {}, {}};

  // Emergencies and human input land before this turn's actions execute.
  for (const auto& event : events) {
    try {
      out.env = apply_event(std::move(out.env), out.roster, event);
      out.eventsApplied.push_back(event);
    } catch (const Error& error) {
      out.eventsRejected.emplace_back(event, error.what());
    }
  }

  std::vector<Action> ordered = decisions.accepted;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Action& a, const Action& b) { return a.actor < b.actor; });

  std::set<AgentId> moved;
  for (const auto& action : ordered) {
    if (action.kind == ActionKind::Wait || action.kind == ActionKind::Combine ||
        action.kind == ActionKind::Split) {
      continue;
    }
    const auto reject = [&](std::string reason) {
      out.rejected.push_back({action, format_action(action), std::move(reason)});
    };
    const auto it = out.roster.find(action.actor);
    if (it == out.roster.end()) {
      reject("unknown-actor");
      continue;
    }
    AgentState& body = it->second;
    if (!can_perform(body, action)) {
      reject("capability");
      continue;
    }
    if (auto reason = check_action(out.env, out.roster, body, action)) {
      reject(*reason);
      continue;
    }

    switch (action.kind) {
      case ActionKind::Move: {
        if (action.site == body.location) break;
        const auto hop = out.env.map.next_hop(body.location, action.site);
        const int needed = hop->cost * body.spec.moveCostPerEdge;
        if (body.transit && body.transit->towards == hop->site) {
          ++body.transit->progress;
        } else {
          body.transit = Transit{hop->site, 1};
        }
        moved.insert(body.id());
        if (body.transit->progress >= needed) {
          set_location(out.roster, body.id(), hop->site, out.arrivals);
        }
        break;
      }
      case ActionKind::PickupPackage:
        out.env.packages[action.package] = PackageLocation::carried_by(body.id());
        body.cargo.packages.insert(action.package);
        break;
      case ActionKind::DropPackage: {
        body.cargo.packages.erase(action.package);
        const auto building = out.env.buildings.find(body.location);
        if (building == out.env.buildings.end()) {
          out.env.packages[action.package] = PackageLocation::at_site(body.location);
          break;
        }
        out.env.packages[action.package] = PackageLocation::entrance(body.location);
        if (has_open_delivery(out.env, action.package, body.location)) {
          building->second.deliveryStage1Done = true;
        }
        break;
      }
      case ActionKind::CarryInside: {
        out.env.packages[action.package] = PackageLocation::inside(action.site);
        out.env.buildings[action.site].deliveryStage2Done = true;
        for (auto& task : out.env.tasks) {
          if (task.kind == TaskKind::Deliver && !task.completed &&
              task.package == action.package && task.target == action.site) {
            task.completed = true;
            break;
          }
        }
        break;
      }
      case ActionKind::Clean: {
        out.env.buildings[action.site].cleaned = true;
        for (auto& task : out.env.tasks) {
          if (task.kind == TaskKind::Clean && task.target == action.site) task.completed = true;
        }
        break;
      }
      default: break;
    }
  }

  // Progress along an edge only survives consecutive Move turns.
  for (auto& [id, agent] : out.roster) {
    if (agent.active && !moved.contains(id)) agent.transit.reset();
  }

  ++out.env.turn;
  return out;
}

bool all_tasks_complete(const EnvironmentState& env) {
  return std::all_of(env.tasks.begin(), env.tasks.end(),
                     [](const TaskSpec& task) { return task.completed; });
}

EnvironmentState make_environment(SiteMap map, std::vector<TaskSpec> tasks) {
  EnvironmentState env;
  env.map = std::move(map);
  for (const auto& site : env.map.sites()) {
    if (site != kPackageSite) env.buildings[site] = Building{site};
  }
  for (auto& task : tasks) {
    if (task.kind == TaskKind::Clean) {
      env.buildings[task.target].needsCleaning = true;
    } else if (task.package) {
      env.packages[*task.package] = PackageLocation::at_site(SiteId(kPackageSite));
    }
  }
  for (auto& task : tasks) {
    if (task.kind == TaskKind::Deliver && !task.package) {
      task.package = fresh_package_id(env);
      env.packages[*task.package] = PackageLocation::at_site(SiteId(kPackageSite));
    }
  }
  env.tasks = std::move(tasks);
  return env;
}

EnvironmentState make_default_environment() {
  return make_environment(SiteMap::complete({"PackageSite", "B1", "B2", "B3"}),
                          {{TaskKind::Clean, "B1", std::nullopt, false},
                           {TaskKind::Clean, "B3", std::nullopt, false},
                           {TaskKind::Deliver, "B1", "p1", false},
                           {TaskKind::Deliver, "B2", "p2", false}});
}

}  // namespace cgot
