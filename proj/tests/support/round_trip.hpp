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
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cgot/agents.hpp"
#include "cgot/composition.hpp"
#include "cgot/engine.hpp"
#include "cgot/thought_graph.hpp"
#include "cgot/world.hpp"

namespace cgot::testing {

inline std::set<NodeId> node_ids(const ThoughtGraph& g, bool skip_split_markers = false) {
  std::set<NodeId> out;
  for (const auto& n : g.nodes()) {
    if (skip_split_markers && n.kind == NodeKind::SplitMarker) continue;
    out.insert(n.id);
  }
  return out;
}

// split(combine([a, b])) over random rosters with random graph histories.
// Each trial picks a colocated pair that may legally combine (robots need a
// carrier), in random order, lets the composite think and drive somewhere,
// then splits it. Returns one line per failed trial.
inline std::vector<std::string> composition_round_trip_failures(int cases, std::uint32_t seed) {
  std::mt19937 rng(seed);
  const AgentKind kinds[] = {AgentKind::EgoVehicle, AgentKind::RobotA, AgentKind::RobotB};
  const std::vector<SiteId> sites{"PackageSite", "B1", "B2", "B3"};
  std::vector<std::string> failures;

  for (int trial = 0; trial < cases; ++trial) {
    const Mode mode = trial % 4 == 3 ? Mode::GoT : Mode::CGoT;
    const SiteId site = sites[rng() % sites.size()];
    std::vector<AgentState> roster;
    roster.push_back(make_agent("V1", AgentKind::EgoVehicle, site));
    const int extra = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < extra; ++i) {
      const AgentKind kind = kinds[rng() % 3];
      const std::string prefix =
          kind == AgentKind::EgoVehicle ? "V" : kind == AgentKind::RobotA ? "RA" : "RB";
      roster.push_back(make_agent(prefix + std::to_string(i + 2), kind,
                                  rng() % 3 ? site : sites[rng() % sites.size()]));
    }
    SystemState system = initialize_system(make_default_environment(), roster, mode, 7);

    for (auto& [id, graph] : system.graphs) {
      const int steps = static_cast<int>(rng() % 5);
      for (int s = 0; s < steps; ++s) {
        const NodeId parent = *graph.latest();
        const NodeKind kind = rng() % 2 ? NodeKind::Intermediate : NodeKind::Output;
        add_thought(graph, {system.nodeIds.next(), kind, "t" + std::to_string(s), id, s + 1},
                    std::span(&parent, 1));
      }
    }

    std::vector<std::vector<AgentId>> pairs;
    for (std::size_t i = 0; i < roster.size(); ++i) {
      for (std::size_t j = i + 1; j < roster.size(); ++j) {
        const AgentState& a = roster[i];
        const AgentState& b = roster[j];
        if (a.location != b.location) continue;
        if (!a.has(Capability::CarryRobot) && !b.has(Capability::CarryRobot)) continue;
        pairs.push_back(rng() % 2 ? std::vector<AgentId>{a.id(), b.id()}
                                  : std::vector<AgentId>{b.id(), a.id()});
      }
    }
    if (pairs.empty()) {
      // V1 always carries; pull the first other agent over to it.
      system.agents.at(roster[1].id()).location = site;
      pairs.push_back({"V1", roster[1].id()});
    }
    const std::vector<AgentId> pair = pairs[rng() % pairs.size()];

    const Roster before = system.agents;
    const auto graphs_before = system.graphs;
    bool ok = true;
    AgentId c;
    try {
      c = combine(system, pair);
    } catch (const std::exception& e) {
      failures.push_back("trial " + std::to_string(trial) + ": combine threw " + e.what());
      continue;
    }

    CapabilitySet expected_caps = before.at(pair[0]).spec.capabilities;
    expected_caps.insert(before.at(pair[1]).spec.capabilities.begin(),
                         before.at(pair[1]).spec.capabilities.end());
    ok &= system.agents.at(c).spec.capabilities == expected_caps;

    if (mode == Mode::CGoT) {
      ThoughtGraph& g = system.graphs.at(c);
      ok &= g.node_count() == graphs_before.at(pair[0]).node_count() +
                                  graphs_before.at(pair[1]).node_count() + 1;
      const int outputs = static_cast<int>(rng() % 4);
      for (int s = 0; s < outputs; ++s) {
        const NodeId parent = *g.latest();
        add_thought(g, {system.nodeIds.next(), NodeKind::Output, "Wait", c, 10 + s},
                    std::span(&parent, 1));
      }
    }
    system.agents.at(c).location = sites[rng() % sites.size()];
    const SiteId split_site = system.agents.at(c).location;
    split(system, c);

    for (const auto& id : pair) {
      const AgentState& after = system.agents.at(id);
      ok &= after.id() == id;
      ok &= after.spec.kind == before.at(id).spec.kind;
      ok &= after.spec.capabilities == before.at(id).spec.capabilities;
      ok &= after.active && !after.memberOf && after.location == split_site;
      ok &= node_ids(system.graphs.at(id), true) == node_ids(graphs_before.at(id));
      ok &= validate(system.graphs.at(id)).empty();
    }
    ok &= !system.agents.contains(c);
    if (!ok) {
      failures.push_back("trial " + std::to_string(trial) + ": " + pair[0] + "+" + pair[1] +
                         " (" + std::string(to_string(mode)) + ")");
    }
  }
  return failures;
}

}  // namespace cgot::testing
