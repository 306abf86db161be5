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

#include "cgot/llm_backend.hpp"

#include <sstream>

#include "cgot/error.hpp"
#include "cgot/text.hpp"

namespace cgot {
namespace {

constexpr std::size_t kSummaryDecisions = 3;

std::string list_or_none(const std::vector<std::string>& items, std::string_view separator) {
  return items.empty() ? "none" : join(items, separator);
}

std::string flag(bool value) { return value ? "1" : "0"; }

}  // namespace

std::uint64_t count_tokens_proxy(std::string_view text) {
  std::uint64_t characters = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0U) != 0x80U) ++characters;
  }
  return (characters + 3) / 4;
}

std::string summarize_graph(const ThoughtGraph& graph) {
  std::vector<std::string> decisions;
  std::size_t outputs = 0;
  for (auto it = graph.nodes().rbegin(); it != graph.nodes().rend(); ++it) {
    if (it->kind != NodeKind::Output) continue;
    ++outputs;
    if (decisions.size() < kSummaryDecisions) decisions.insert(decisions.begin(), it->content);
  }
  std::ostringstream out;
  out << "nodes " << graph.node_count() << ", edges " << graph.edge_count() << ", outputs "
      << outputs << "\n";
  out << "recent decisions: " << list_or_none(decisions, " | ") << "\n";
  return out.str();
}

std::string render_prompt(const AgentView& view, const ThoughtGraph* graph) {
  const AgentState& body = view.body;
  std::ostringstream out;

  out << "[ROLE]\n";
  out << "agent " << view.self << " (" << to_string(view.roster.contains(view.self)
                                                         ? view.roster.at(view.self).spec.kind
                                                         : body.spec.kind)
      << "), " << to_string(view.role);
  if (view.role == InferenceRole::Composite) {
    out << " of " << join(std::vector<std::string>(body.cargo.agents.begin(), body.cargo.agents.end()), "+");
  } else if (view.role == InferenceRole::Driver || view.role == InferenceRole::Passenger) {
    out << " in " << body.id();
  }
  out << "\n";

  out << "[CAPABILITIES]\n";
  std::vector<std::string> caps;
  for (Capability c : body.spec.capabilities) caps.emplace_back(to_string(c));
  out << list_or_none(caps, ", ") << "; move cost " << body.spec.moveCostPerEdge << "/edge\n";

  out << "[ENVIRONMENT]\n";
  out << "turn " << view.env.turn + 1 << "\n";
  out << "location " << body.location;
  if (body.transit) out << " (en route to " << body.transit->towards << ", " << body.transit->progress << " done)";
  out << "\n";
  std::vector<std::string> cargo(body.cargo.packages.begin(), body.cargo.packages.end());
  cargo.insert(cargo.end(), body.cargo.agents.begin(), body.cargo.agents.end());
  out << "cargo " << list_or_none(cargo, ", ") << "\n";
  std::vector<std::string> blocked(view.env.map.blocked().begin(), view.env.map.blocked().end());
  out << "sites " << join(view.env.map.sites(), ", ") << "; blocked " << list_or_none(blocked, ", ")
      << "\n";
  for (const auto& [id, b] : view.env.buildings) {
    out << "building " << id << " clean " << flag(b.needsCleaning) << flag(b.cleaned)
        << " delivery " << flag(b.deliveryStage1Done) << flag(b.deliveryStage2Done) << "\n";
  }
  std::vector<std::string> packages;
  for (const auto& [id, where] : view.env.packages) packages.push_back(id + "@" + to_string(where));
  out << "packages " << list_or_none(packages, ", ") << "\n";
  std::vector<std::string> pending;
  for (const auto& task : view.env.pending_tasks()) {
    pending.push_back(std::string(to_string(task.kind)) + "(" + task.target +
                      (task.package ? "," + *task.package : "") + ")");
  }
  out << "pending " << list_or_none(pending, ", ") << "\n";
  std::vector<std::string> others;
  for (const auto& [id, agent] : view.roster) {
    if (!agent.active || id == body.id()) continue;
    others.push_back(id + "@" + agent.location);
  }
  out << "others " << list_or_none(others, ", ") << "\n";

  out << "[GRAPH SUMMARY]\n";
  out << (graph != nullptr ? summarize_graph(*graph) : "no graph\n");

  out << "[PEER DECISIONS]\n";
  out << list_or_none(view.peerDecisions, "\n") << "\n";

  out << "[EVENTS]\n";
  std::vector<std::string> events;
  for (const auto& event : view.recentEvents) events.push_back(describe(event));
  out << list_or_none(events, "\n") << "\n";
  return out.str();
}

bool prompt_well_formed(std::string_view prompt) {
  std::size_t cursor = 0;
  for (std::string_view section : kPromptSections) {
    const std::size_t at = prompt.find(section, cursor);
    if (at == std::string_view::npos) return false;
    if (prompt.find(section, at + section.size()) != std::string_view::npos) return false;
    cursor = at + section.size();
  }
  return true;
}

std::string render_completion(const std::vector<std::string>& thoughts,
                              const std::vector<std::string>& actions) {
  std::string out;
  for (const auto& thought : thoughts) out += "THOUGHT: " + thought + "\n";
  for (const auto& action : actions) out += "ACTION: " + action + "\n";
  return out;
}

InferenceResponse parse_completion(std::string_view text) {
  InferenceResponse response;
  for (const auto& raw : split(text, '\n')) {
    const std::string_view line = trim(raw);
    if (line.size() >= 7 && iequals(line.substr(0, 7), "ACTION:")) {
      const auto action = trim(line.substr(7));
      if (!action.empty()) response.actions.emplace_back(action);
    } else if (line.size() >= 8 && iequals(line.substr(0, 8), "THOUGHT:")) {
      const auto thought = trim(line.substr(8));
      if (!thought.empty()) response.thoughts.emplace_back(thought);
    }
  }
  return response;
}

InferenceResponse ScriptedBackend::infer(const InferenceRequest& request) {
  if (!request.view) {
    throw Error(ErrorCode::InvalidInput, "scripted backend needs the structured agent view");
  }
  const PolicyResult policy = scripted_policy(*request.view);
  InferenceResponse response;
  response.thoughts = policy.thoughts;
  response.actions = policy.actions;
  if (response.actions.empty()) response.actions.push_back("Wait");
  response.usage.promptTokens = count_tokens_proxy(request.prompt);
  response.usage.completionTokens =
      count_tokens_proxy(render_completion(response.thoughts, response.actions));
  return response;
}

}  // namespace cgot
