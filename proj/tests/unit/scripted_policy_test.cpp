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

#include <gtest/gtest.h>

#include "cgot/composition.hpp"
#include "cgot/engine.hpp"
#include "cgot/scenario.hpp"
#include "cgot/scripted_policy.hpp"

namespace cgot {
namespace {

SystemState system_with(std::vector<AgentState> roster, std::vector<TaskSpec> tasks,
                        Mode mode = Mode::CGoT) {
  EnvironmentState env =
      make_environment(SiteMap::complete({"PackageSite", "B1", "B2", "B3"}), std::move(tasks));
  return initialize_system(std::move(env), roster, mode, 7);
}

std::vector<std::string> decide(const SystemState& system, const AgentId& unit,
                                std::vector<std::string> peers = {}) {
  return scripted_policy(make_view(system, unit, std::move(peers))).actions;
}

using Actions = std::vector<std::string>;

TEST(ScriptedPolicy, RobotCleansUncleanedBuildingItStandsIn) {
  const SystemState system = system_with({make_agent("RB", AgentKind::RobotB, "B1")},
                                         {{TaskKind::Clean, "B1", std::nullopt, false}});
  EXPECT_EQ(decide(system, "RB"), Actions{"Clean(B1)"});
}

TEST(ScriptedPolicy, NoReachableTaskMeansWait) {
  SystemState system = system_with({make_agent("RB", AgentKind::RobotB, "PackageSite")},
                                    {{TaskKind::Clean, "B2", std::nullopt, false}});
  system.env.map.block("B2");
  EXPECT_EQ(decide(system, "RB"), Actions{"Wait"});
  // Nothing in its line of work either.
  const SystemState deliveries = system_with({make_agent("RB", AgentKind::RobotB, "PackageSite")},
                                             {{TaskKind::Deliver, "B2", "p1", false}});
  EXPECT_EQ(decide(deliveries, "RB"), Actions{"Wait"});
}

TEST(ScriptedPolicy, AllTasksCompleteMeansWait) {
  SystemState system = system_with({make_agent("V1", AgentKind::EgoVehicle, "PackageSite")},
                                    {{TaskKind::Deliver, "B1", "p1", false}});
  system.env.tasks[0].completed = true;
  EXPECT_EQ(decide(system, "V1"), Actions{"Wait"});
}

TEST(ScriptedPolicy, VehiclePicksUpThenHeadsForTheTarget) {
  SystemState system = system_with({make_agent("V1", AgentKind::EgoVehicle, "PackageSite")},
                                    {{TaskKind::Deliver, "B1", "p1", false}});
  EXPECT_EQ(decide(system, "V1"), Actions{"PickupPackage(p1)"});
  ScriptedBackend backend(7);
  run_turn(system, backend);
  EXPECT_EQ(system.env.packages.at("p1"), PackageLocation::carried_by("V1"));
  EXPECT_EQ(decide(system, "V1"), Actions{"Move(B1)"});
}

TEST(ScriptedPolicy, VehicleOffersARideRobotWaits) {
  const SystemState system = system_with({make_agent("V1", AgentKind::EgoVehicle, "PackageSite"),
                                          make_agent("RA", AgentKind::RobotA, "PackageSite")},
                                         {{TaskKind::Deliver, "B2", "p1", false}});
  // Pickup comes first; with the package gone, the ride.
  EXPECT_EQ(decide(system, "V1"), Actions{"PickupPackage(p1)"});
  EXPECT_EQ(decide(system, "RA"), Actions{"Wait"});

  SystemState later = system;
  later.agents.at("V1").cargo.packages.insert("p1");
  later.env.packages.at("p1") = PackageLocation::carried_by("V1");
  EXPECT_EQ(decide(later, "V1"), Actions{"Combine(V1,RA)"});
  EXPECT_EQ(decide(later, "RA", {"V1: Combine(V1,RA)"}), Actions{"Wait"});
}

TEST(ScriptedPolicy, ClaimedRobotIsNotOfferedTwice) {
  const SystemState system = system_with({make_agent("V1", AgentKind::EgoVehicle, "PackageSite"),
                                          make_agent("V2", AgentKind::EgoVehicle, "PackageSite"),
                                          make_agent("RB", AgentKind::RobotB, "PackageSite")},
                                         {{TaskKind::Clean, "B3", std::nullopt, false}});
  EXPECT_EQ(decide(system, "V1"), Actions{"Combine(V1,RB)"});
  EXPECT_NE(decide(system, "V2", {"V1: Combine(V1,RB)"}), Actions{"Combine(V2,RB)"});
}

TEST(ScriptedPolicy, PeerClaimsAvoidDoublePickup) {
  const SystemState system = system_with({make_agent("V1", AgentKind::EgoVehicle, "PackageSite"),
                                          make_agent("V2", AgentKind::EgoVehicle, "PackageSite")},
                                         {{TaskKind::Deliver, "B1", "p1", false},
                                          {TaskKind::Deliver, "B2", "p2", false}});
  EXPECT_EQ(decide(system, "V1"), Actions{"PickupPackage(p1)"});
  EXPECT_EQ(decide(system, "V2", {"V1: PickupPackage(p1)"}), Actions{"PickupPackage(p2)"});
  const PeerClaims claims = claims_from({"V1: PickupPackage(p1)", "C1: Clean(B3)", "V2: Combine(V2,RB)"});
  EXPECT_EQ(claims.packages, std::set<PackageId>{"p1"});
  EXPECT_EQ(claims.cleanings, std::set<SiteId>{"B3"});
  EXPECT_TRUE(claims.agents.contains("RB"));
}

TEST(ScriptedPolicy, CompositeSplitsAtItsRobotsTaskSite) {
  SystemState system = system_with({make_agent("V1", AgentKind::EgoVehicle, "B2"),
                                    make_agent("RA", AgentKind::RobotA, "B2"),
                                    make_agent("V2", AgentKind::EgoVehicle, "B3")},
                                   {{TaskKind::Deliver, "B2", "p1", false}});
  // p1 is still on its way with V2; RA has work at B2 but no local step.
  system.agents.at("V2").cargo.packages.insert("p1");
  system.env.packages.at("p1") = PackageLocation::carried_by("V2");
  const AgentId c = combine(system, {"V1", "RA"});
  EXPECT_EQ(decide(system, c), Actions{"Split(C1)"});
}

TEST(ScriptedPolicy, GotDriverSteersPassengerWaits) {
  SystemState system = system_with({make_agent("V1", AgentKind::EgoVehicle, "PackageSite"),
                                    make_agent("RB", AgentKind::RobotB, "PackageSite")},
                                   {{TaskKind::Clean, "B3", std::nullopt, false}},
                                   Mode::GoT);
  combine(system, {"V1", "RB"});
  const AgentView driver = make_view(system, "V1", {});
  const AgentView passenger = make_view(system, "RB", {});
  EXPECT_EQ(driver.role, InferenceRole::Driver);
  EXPECT_EQ(passenger.role, InferenceRole::Passenger);
  EXPECT_EQ(driver.body.id(), "C1");
  EXPECT_EQ(scripted_policy(driver).actions, Actions{"Move(B3)"});
  EXPECT_EQ(scripted_policy(passenger).actions, Actions{"Wait"});
  // The CGoT composite makes the same physical decision.
  SystemState cgot = system_with({make_agent("V1", AgentKind::EgoVehicle, "PackageSite"),
                                  make_agent("RB", AgentKind::RobotB, "PackageSite")},
                                 {{TaskKind::Clean, "B3", std::nullopt, false}});
  combine(cgot, {"V1", "RB"});
  EXPECT_EQ(decide(cgot, "C1"), Actions{"Move(B3)"});
}

TEST(ScriptedPolicy, NearestTaskSiteTieGoesToLowestId) {
  const AgentState rb = make_agent("RB", AgentKind::RobotB, "PackageSite");
  EnvironmentState env = make_environment(SiteMap::complete({"PackageSite", "B1", "B2", "B3"}),
                                          {{TaskKind::Clean, "B3", std::nullopt, false},
                                           {TaskKind::Clean, "B2", std::nullopt, false}});
  EXPECT_EQ(nearest_task_site(env, rb, {}), "B2");
  EXPECT_EQ(task_sites(env, rb, {}), (std::vector<SiteId>{"B2", "B3"}));
  env.map.block("B2");
  EXPECT_EQ(nearest_task_site(env, rb, {}), "B3");
}

TEST(ScriptedPolicy, AlwaysOneActionAndSomeThoughts) {
  SystemState system = make_system(load_scenario("default"), Mode::CGoT);
  for (const auto& unit : inference_units(system)) {
    const PolicyResult r = scripted_policy(make_view(system, unit, {}));
    EXPECT_EQ(r.actions.size(), 1u);
    EXPECT_FALSE(r.thoughts.empty());
  }
}

}  // namespace
}  // namespace cgot
