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

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cgot/action.hpp"
#include "cgot/agents.hpp"
#include "cgot/types.hpp"

namespace cgot {

struct SiteEdge {
  SiteId a;
  SiteId b;
  int cost = 1;

  friend bool operator==(const SiteEdge&, const SiteEdge&) = default;
};

/// Undirected site graph. Blocked sites cannot be entered or passed through;
/// an agent already standing on one may still leave.
class SiteMap {
 public:
  SiteMap() = default;
  SiteMap(std::vector<SiteId> sites, std::vector<SiteEdge> edges);

  /// Complete graph with unit edge cost.
  static SiteMap complete(std::vector<SiteId> sites);

  const std::vector<SiteId>& sites() const { return sites_; }
  const std::vector<SiteEdge>& edges() const { return edges_; }
  const std::set<SiteId>& blocked() const { return blocked_; }

  bool has_site(std::string_view site) const;
  bool is_blocked(std::string_view site) const { return blocked_.contains(std::string(site)); }
  void block(const SiteId& site) { blocked_.insert(site); }
  void unblock(const SiteId& site) { blocked_.erase(site); }

  /// Connected when nothing is blocked.
  bool connected() const;

  /// Cheapest path cost avoiding blocked sites (the origin may be blocked).
  std::optional<int> distance(const SiteId& from, const SiteId& to) const;

  struct Hop {
    SiteId site;
    int cost = 1;
  };
  /// First hop of the cheapest path; ties go to the lowest site id.
  std::optional<Hop> next_hop(const SiteId& from, const SiteId& to) const;

  friend bool operator==(const SiteMap&, const SiteMap&) = default;

 private:
  std::map<SiteId, int> distances_from(const SiteId& origin) const;

  std::vector<SiteId> sites_;  // sorted
  std::vector<SiteEdge> edges_;
  std::set<SiteId> blocked_;
};

struct Building {
  SiteId id;
  bool needsCleaning = false;
  bool cleaned = false;
  bool deliveryStage1Done = false;  // package at the entrance
  bool deliveryStage2Done = false;  // package carried inside

  friend bool operator==(const Building&, const Building&) = default;
};

enum class TaskKind { Clean, Deliver };

std::string_view to_string(TaskKind kind);
std::optional<TaskKind> parse_task_kind(std::string_view text);

struct TaskSpec {
  TaskKind kind = TaskKind::Clean;
  SiteId target;
  std::optional<PackageId> package;  // Deliver only
  bool completed = false;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct PackageLocation {
  enum class Where { AtSite, Entrance, Inside, CarriedBy };
  Where where = Where::AtSite;
  std::string ref;  // site id, building id or agent id

  static PackageLocation at_site(SiteId site) { return {Where::AtSite, std::move(site)}; }
  static PackageLocation entrance(SiteId b) { return {Where::Entrance, std::move(b)}; }
  static PackageLocation inside(SiteId b) { return {Where::Inside, std::move(b)}; }
  static PackageLocation carried_by(AgentId a) { return {Where::CarriedBy, std::move(a)}; }

  friend bool operator==(const PackageLocation&, const PackageLocation&) = default;
};

/// "PackageSite", "entrance(B1)", "inside(B1)", "carriedBy(V1)".
std::string to_string(const PackageLocation& location);

enum class EventKind {
  BuildingBlocked,
  BuildingUnblocked,
  NewTask,
  AgentDisabled,
  AgentEnabled,
  HumanInstruction
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

struct ExternalEvent {
  EventKind kind = EventKind::HumanInstruction;
  int atTurn = 0;
  SiteId building;           // BuildingBlocked/Unblocked, NewTask target
  AgentId agent;             // AgentDisabled/Enabled
  TaskKind taskKind = TaskKind::Clean;  // NewTask
  std::string instruction;   // HumanInstruction

  friend bool operator==(const ExternalEvent&, const ExternalEvent&) = default;
};

std::string describe(const ExternalEvent& event);

struct EnvironmentState {
  SiteMap map;
  std::map<SiteId, Building> buildings;
  std::map<PackageId, PackageLocation> packages;
  std::vector<TaskSpec> tasks;  // completed tasks stay listed with completed = true
  int turn = 0;                 // number of completed turns
  std::vector<ExternalEvent> eventQueue;
  std::set<AgentId> disabled;
  int nextPackageIndex = 1;

  std::vector<TaskSpec> pending_tasks() const;

  friend bool operator==(const EnvironmentState&, const EnvironmentState&) = default;
};

/// Throws EventRejected if the event names an unknown building or agent or an
/// instruction outside the keyword mapping.
void check_event(const EnvironmentState& env, const Roster& roster, const ExternalEvent& event);

/// Maps "clean <b>" / "deliver <b>" to the equivalent NewTask event.
std::optional<ExternalEvent> translate_instruction(const EnvironmentState& env,
                                                   const ExternalEvent& event);

/// Throws EventRejected (see check_event).
EnvironmentState apply_event(EnvironmentState env, const Roster& roster,
                             const ExternalEvent& event);

/// Removes and returns queued events with atTurn <= turn, in queue order.
std::vector<ExternalEvent> take_due_events(EnvironmentState& env, int turn);

/// True when the body is disabled itself or carries a disabled member.
bool is_disabled(const EnvironmentState& env, const Roster& roster, const AgentState& body);

/// Environment-side precondition for `action` executed by `body`.
/// Returns the rejection reason, or nullopt if the action may run.
std::optional<std::string> check_action(const EnvironmentState& env, const Roster& roster,
                                        const AgentState& body, const Action& action);

struct Arrival {
  AgentId agent;
  SiteId site;

  friend bool operator==(const Arrival&, const Arrival&) = default;
};

struct StepOutcome {
  EnvironmentState env;
  Roster roster;
  std::vector<Rejection> rejected;
  std::vector<ExternalEvent> eventsApplied;
  std::vector<std::pair<ExternalEvent, std::string>> eventsRejected;
  std::vector<Arrival> arrivals;  // bodies and carried members that reached a new site
};

/// E' = H(E, D, I): applies `events`, then the accepted physical actions in
/// actor-id order, then advances the turn counter. Combine/Split/Wait are
/// no-ops here. Pure: the inputs are not modified.
StepOutcome step_environment(const EnvironmentState& env, const Roster& roster,
                             const DecisionSet& decisions, std::span<const ExternalEvent> events);

bool all_tasks_complete(const EnvironmentState& env);

/// Buildings are every site except PackageSite.
EnvironmentState make_environment(SiteMap map, std::vector<TaskSpec> tasks);

/// Four sites, tasks Clean B1, Clean B3, Deliver B1 (p1), Deliver B2 (p2).
EnvironmentState make_default_environment();

}  // namespace cgot
