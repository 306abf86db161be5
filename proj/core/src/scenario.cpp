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

#include "cgot/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "cgot/engine.hpp"
#include "cgot/error.hpp"
#include "cgot/serialize.hpp"

namespace cgot {
namespace {

using nlohmann::json;

constexpr std::string_view kDefaultScenario = R"({
  "name": "default",
  "sites": ["PackageSite", "B1", "B2", "B3"],
  "roster": [
    {"id": "V1", "kind": "EgoVehicle", "location": "PackageSite"},
    {"id": "V2", "kind": "EgoVehicle", "location": "PackageSite"},
    {"id": "RA", "kind": "RobotA", "location": "PackageSite"},
    {"id": "RB", "kind": "RobotB", "location": "PackageSite"}
  ],
  "tasks": [
    {"kind": "Clean", "target": "B1"},
    {"kind": "Clean", "target": "B3"},
    {"kind": "Deliver", "target": "B1", "package": "p1"},
    {"kind": "Deliver", "target": "B2", "package": "p2"}
  ],
  "events": [],
  "maxTurns": 50,
  "seed": 7
})";

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ValidationError, path + ": " + what);
}

std::string string_at(const json& doc, const std::string& key, const std::string& path) {
  if (!doc.contains(key)) invalid(path + "." + key, "missing");
  if (!doc[key].is_string() || doc[key].get<std::string>().empty()) {
    invalid(path + "." + key, "expected a non-empty string");
  }
  return doc[key].get<std::string>();
}

const json& array_at(const json& doc, const std::string& key, bool required) {
  static const json kEmpty = json::array();
  if (!doc.contains(key)) {
    if (required) invalid(key, "missing");
    return kEmpty;
  }
  if (!doc[key].is_array()) invalid(key, "expected an array");
  return doc[key];
}

}  // namespace

std::string_view default_scenario_document() { return kDefaultScenario; }

std::string stable_digest(std::string_view text) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

ScenarioConfig parse_scenario(const json& doc) {
  if (!doc.is_object()) invalid("scenario", "expected an object");
  ScenarioConfig scenario;
  scenario.name = doc.value("name", std::string("unnamed"));

  std::set<SiteId> sites;
  const auto& site_list = array_at(doc, "sites", true);
  for (std::size_t i = 0; i < site_list.size(); ++i) {
    const std::string path = "sites[" + std::to_string(i) + "]";
    if (!site_list[i].is_string() || site_list[i].get<std::string>().empty()) {
      invalid(path, "expected a non-empty string");
    }
    if (!sites.insert(site_list[i].get<std::string>()).second) invalid(path, "duplicate site");
    scenario.sites.push_back(site_list[i].get<std::string>());
  }
  if (!sites.contains(std::string(kPackageSite))) invalid("sites", "PackageSite is required");
  const auto is_building = [&](const SiteId& s) { return sites.contains(s) && s != kPackageSite; };

  const auto& edge_list = array_at(doc, "edges", false);
  for (std::size_t i = 0; i < edge_list.size(); ++i) {
    const std::string path = "edges[" + std::to_string(i) + "]";
    const auto& item = edge_list[i];
    if (!item.is_array() || item.size() < 2 || item.size() > 3 || !item[0].is_string() ||
        !item[1].is_string()) {
      invalid(path, "expected [site, site, cost?]");
    }
    SiteEdge edge{item[0].get<std::string>(), item[1].get<std::string>(), 1};
    if (!sites.contains(edge.a)) invalid(path + "[0]", "unknown site " + edge.a);
    if (!sites.contains(edge.b)) invalid(path + "[1]", "unknown site " + edge.b);
    if (item.size() == 3) {
      if (!item[2].is_number_integer() || item[2].get<int>() < 1) {
        invalid(path + "[2]", "cost must be a positive integer");
      }
      edge.cost = item[2].get<int>();
    }
    scenario.edges.push_back(edge);
  }
  if (!scenario.edges.empty() && !SiteMap(scenario.sites, scenario.edges).connected()) {
    invalid("edges", "site map is not connected");
  }

  std::set<AgentId> agents;
  static const std::regex kCompositeId("C[0-9]+");
  const auto& roster = array_at(doc, "roster", true);
  for (std::size_t i = 0; i < roster.size(); ++i) {
    const std::string path = "roster[" + std::to_string(i) + "]";
    const auto& item = roster[i];
    if (!item.is_object()) invalid(path, "expected an object");
    RosterEntry entry;
    entry.id = string_at(item, "id", path);
    if (std::regex_match(entry.id, kCompositeId)) {
      invalid(path + ".id", "ids of the form C<k> are reserved for composites");
    }
    if (!agents.insert(entry.id).second) invalid(path + ".id", "duplicate agent " + entry.id);
    const auto kind = parse_agent_kind(string_at(item, "kind", path));
    if (!kind || *kind == AgentKind::Composite) {
      invalid(path + ".kind", "expected EgoVehicle, RobotA or RobotB");
    }
    entry.kind = *kind;
    entry.location = string_at(item, "location", path);
    if (!sites.contains(entry.location)) invalid(path + ".location", "unknown site " + entry.location);
    if (item.contains("capabilities")) {
      if (!item["capabilities"].is_array()) invalid(path + ".capabilities", "expected an array");
      CapabilitySet caps;
      for (std::size_t j = 0; j < item["capabilities"].size(); ++j) {
        const auto& cap = item["capabilities"][j];
        const auto parsed = cap.is_string() ? parse_capability(cap.get<std::string>()) : std::nullopt;
        if (!parsed) invalid(path + ".capabilities[" + std::to_string(j) + "]", "unknown capability");
        caps.insert(*parsed);
      }
      entry.capabilities = caps;
    }
    if (item.contains("moveCostPerEdge")) {
      if (!item["moveCostPerEdge"].is_number_integer() || item["moveCostPerEdge"].get<int>() < 1) {
        invalid(path + ".moveCostPerEdge", "expected a positive integer");
      }
      entry.moveCostPerEdge = item["moveCostPerEdge"].get<int>();
    }
    scenario.roster.push_back(std::move(entry));
  }

  std::set<PackageId> packages;
  const auto& tasks = array_at(doc, "tasks", true);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string path = "tasks[" + std::to_string(i) + "]";
    const auto& item = tasks[i];
    if (!item.is_object()) invalid(path, "expected an object");
    const auto kind = parse_task_kind(string_at(item, "kind", path));
    if (!kind) invalid(path + ".kind", "expected Clean or Deliver");
    TaskSpec task{*kind, string_at(item, "target", path), std::nullopt, false};
    if (!is_building(task.target)) invalid(path + ".target", "unknown building " + task.target);
    if (item.contains("package")) {
      if (*kind != TaskKind::Deliver) invalid(path + ".package", "only Deliver tasks carry packages");
      task.package = string_at(item, "package", path);
      if (!packages.insert(*task.package).second) invalid(path + ".package", "duplicate package");
    }
    scenario.tasks.push_back(std::move(task));
  }

  const auto& events = array_at(doc, "events", false);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string path = "events[" + std::to_string(i) + "]";
    ExternalEvent event = event_from_json(events[i], path);
    switch (event.kind) {
      case EventKind::BuildingBlocked:
      case EventKind::BuildingUnblocked:
      case EventKind::NewTask:
        if (!is_building(event.building)) invalid(path + ".building", "unknown building " + event.building);
        break;
      case EventKind::AgentDisabled:
      case EventKind::AgentEnabled:
        if (!agents.contains(event.agent)) invalid(path + ".agent", "unknown agent " + event.agent);
        break;
      case EventKind::HumanInstruction: break;
    }
    scenario.events.push_back(std::move(event));
  }

  if (doc.contains("maxTurns")) {
    if (!doc["maxTurns"].is_number_integer() || doc["maxTurns"].get<long long>() < 1) {
      invalid("maxTurns", "must be an integer >= 1");
    }
    scenario.maxTurns = doc["maxTurns"].get<int>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() || (!doc["seed"].is_number_unsigned() && doc["seed"].get<std::int64_t>() < 0)) {
      invalid("seed", "expected a non-negative integer");
    }
    scenario.seed = doc["seed"].get<std::uint64_t>();
  }

  // Human instructions are checked once the environment exists.
  const EnvironmentState env = build_environment(scenario);
  for (std::size_t i = 0; i < scenario.events.size(); ++i) {
    const auto& event = scenario.events[i];
    if (event.kind == EventKind::HumanInstruction && !translate_instruction(env, event)) {
      invalid("events[" + std::to_string(i) + "].text", "expected \"clean <b>\" or \"deliver <b>\"");
    }
  }

  scenario.hash = stable_digest(doc.dump());
  return scenario;
}

ScenarioConfig load_scenario(const std::string& path_or_name) {
  if (path_or_name == "default") {
    return parse_scenario(json::parse(default_scenario_document()));
  }
  std::ifstream in(path_or_name);
  if (!in) throw Error(ErrorCode::NotFound, "scenario file not found: " + path_or_name);
  std::ostringstream text;
  text << in.rdbuf();
  const json doc = json::parse(text.str(), nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::ValidationError, path_or_name + ": not valid JSON");
  }
  return parse_scenario(doc);
}

std::vector<AgentState> build_roster(const ScenarioConfig& scenario) {
  std::vector<AgentState> roster;
  for (const auto& entry : scenario.roster) {
    AgentState agent = make_agent(entry.id, entry.kind, entry.location);
    if (entry.capabilities) agent.spec.capabilities = *entry.capabilities;
    if (entry.moveCostPerEdge) agent.spec.moveCostPerEdge = *entry.moveCostPerEdge;
    roster.push_back(std::move(agent));
  }
  return roster;
}

EnvironmentState build_environment(const ScenarioConfig& scenario) {
  SiteMap map = scenario.edges.empty() ? SiteMap::complete(scenario.sites)
                                       : SiteMap(scenario.sites, scenario.edges);
  EnvironmentState env = make_environment(std::move(map), scenario.tasks);
  env.eventQueue = scenario.events;
  return env;
}

SystemState make_system(const ScenarioConfig& scenario, Mode mode,
                        std::optional<std::uint64_t> seed) {
  return initialize_system(build_environment(scenario), build_roster(scenario), mode,
                           seed.value_or(scenario.seed), scenario.hash);
}

}  // namespace cgot
