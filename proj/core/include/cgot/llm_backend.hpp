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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cgot/scripted_policy.hpp"
#include "cgot/thought_graph.hpp"

namespace cgot {

struct TokenUsage {
  std::uint64_t promptTokens = 0;
  std::uint64_t completionTokens = 0;

  std::uint64_t total() const { return promptTokens + completionTokens; }
  friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

struct InferenceRequest {
  AgentId agentId;
  std::string prompt;  // [ROLE] [CAPABILITIES] [ENVIRONMENT] [GRAPH SUMMARY] [PEER DECISIONS] [EVENTS]
  int turn = 0;
  std::shared_ptr<const AgentView> view;  // structured twin of the prompt, for the scripted oracle
};

struct InferenceResponse {
  std::vector<std::string> thoughts;  // become Intermediate nodes
  std::vector<std::string> actions;   // become Output nodes; never empty
  TokenUsage usage;
};

/// The pluggable model behind every inference call.
class InferenceBackend {
 public:
  virtual ~InferenceBackend() = default;
  virtual InferenceResponse infer(const InferenceRequest& request) = 0;
  virtual std::string_view name() const = 0;
};

/// ceil(characters / 4), counting UTF-8 code points.
std::uint64_t count_tokens_proxy(std::string_view text);

inline constexpr std::string_view kPromptSections[] = {
    "[ROLE]", "[CAPABILITIES]", "[ENVIRONMENT]", "[GRAPH SUMMARY]", "[PEER DECISIONS]", "[EVENTS]"};

/// Summary lines of a graph: counts plus the last few decisions. Size is
/// bounded regardless of graph size.
std::string summarize_graph(const ThoughtGraph& graph);

std::string render_prompt(const AgentView& view, const ThoughtGraph* graph);

/// True when all six sections appear once, in order.
bool prompt_well_formed(std::string_view prompt);

/// "THOUGHT: ..." / "ACTION: ..." lines. Other lines are ignored.
std::string render_completion(const std::vector<std::string>& thoughts,
                              const std::vector<std::string>& actions);
InferenceResponse parse_completion(std::string_view text);

/// Deterministic backend running scripted_policy. Usage comes from the token
/// proxy over the prompt and the rendered completion.
class ScriptedBackend final : public InferenceBackend {
 public:
  explicit ScriptedBackend(std::uint64_t seed = 0) : seed_(seed) {}

  InferenceResponse infer(const InferenceRequest& request) override;
  std::string_view name() const override { return "scripted"; }
  std::uint64_t seed() const { return seed_; }

 private:
  // No stochastic choices yet; kept so runs record which seed produced them.
  std::uint64_t seed_;
};

}  // namespace cgot
