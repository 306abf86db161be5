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

#include "cgot/engine.hpp"
#include "cgot/error.hpp"
#include "cgot/scenario.hpp"
#include "cgot/serialize.hpp"

namespace cgot {
namespace {

using nlohmann::json;

SystemState finished_run() {
  SystemState system = make_system(load_scenario("default"), Mode::CGoT);
  ScriptedBackend backend(7);
  run_to_completion(system, backend, 50);
  return system;
}

TEST(GraphJson, RoundTrip) {
  const SystemState system = finished_run();
  for (const auto& [id, graph] : system.graphs) {
    const ThoughtGraph back = graph_from_json(to_json(graph));
    EXPECT_EQ(back, graph) << id;
  }
}

TEST(GraphJson, MalformedDocumentsAreValidationErrors) {
  const auto code = [](const json& doc) {
    try {
      graph_from_json(doc);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidInput;
  };
  EXPECT_EQ(code(json::object()), ErrorCode::ValidationError);
  EXPECT_EQ(code({{"owner", "V1"}, {"nodes", json::array({{{"id", 1}}})}, {"edges", json::array()}}),
            ErrorCode::ValidationError);
  EXPECT_EQ(code({{"owner", "V1"},
                  {"nodes", json::array({{{"id", 1}, {"kind", "Sideways"}, {"content", ""}, {"producer", "V1"}, {"turn", 0}}})},
                  {"edges", json::array()}}),
            ErrorCode::ValidationError);
}

TEST(GraphJson, CyclicDocumentLoadsButFailsValidation) {
  const json doc = {{"owner", "V1"},
                    {"nodes", json::array({{{"id", 1}, {"kind", "Intermediate"}, {"content", "a"}, {"producer", "V1"}, {"turn", 1}},
                                           {{"id", 2}, {"kind", "Intermediate"}, {"content", "b"}, {"producer", "V1"}, {"turn", 1}}})},
                    {"edges", json::array({json::array({1, 2}), json::array({2, 1})})}};
  EXPECT_FALSE(validate(graph_from_json(doc)).empty());
}

TEST(EventJson, RoundTripAndFieldPaths) {
  ExternalEvent e;
  e.kind = EventKind::NewTask;
  e.atTurn = 4;
  e.building = "B3";
  e.taskKind = TaskKind::Deliver;
  EXPECT_EQ(event_from_json(to_json(e)), e);

  try {
    event_from_json({{"kind", "Meteor"}, {"atTurn", 1}}, "command.event");
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::ValidationError);
    EXPECT_NE(std::string(err.what()).find("command.event.kind"), std::string::npos);
  }
  EXPECT_THROW(event_from_json({{"kind", "BuildingBlocked"}, {"atTurn", -1}, {"building", "B2"}}), Error);
}

TEST(TurnLogJson, CarriesTheStructuredFields) {
  const SystemState system = finished_run();
  const json first = to_json(system.log.front());
  for (const char* key : {"turn", "activeAgents", "inferenceCalls", "usage", "substitutions", "accepted",
                          "rejected", "compositesFormed", "compositesDissolved", "eventsApplied",
                          "eventsRejected", "envDiff"}) {
    EXPECT_TRUE(first.contains(key)) << key;
  }
  EXPECT_EQ(first["inferenceCalls"], 4);
  EXPECT_EQ(first["usage"].size(), 4u);
  EXPECT_EQ(to_json(system.log[1])["compositesFormed"], json::array({"C1", "C2"}));
}

TEST(FinalState, IdenticalRunsSerializeIdentically) {
  EXPECT_EQ(final_state_to_json(finished_run()).dump(), final_state_to_json(finished_run()).dump());
  const json state = final_state_to_json(finished_run());
  EXPECT_TRUE(state.contains("environment"));
  EXPECT_TRUE(state.contains("agents"));
  EXPECT_TRUE(state.contains("compositions"));
}

}  // namespace
}  // namespace cgot
