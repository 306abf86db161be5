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

#include "cgot/thought_graph.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cgot/error.hpp"
#include "cgot/text.hpp"

namespace cgot {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Initial: return "Initial";
    case NodeKind::Intermediate: return "Intermediate";
    case NodeKind::Output: return "Output";
    case NodeKind::CompositionMarker: return "CompositionMarker";
    case NodeKind::SplitMarker: return "SplitMarker";
  }
  return "Intermediate";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  for (NodeKind kind : {NodeKind::Initial, NodeKind::Intermediate, NodeKind::Output,
                        NodeKind::CompositionMarker, NodeKind::SplitMarker}) {
    if (iequals(text, to_string(kind))) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(GraphViolation::Kind kind) {
  switch (kind) {
    case GraphViolation::Kind::SelfLoop: return "self-loop";
    case GraphViolation::Kind::Cycle: return "cycle";
    case GraphViolation::Kind::DanglingEdge: return "dangling-edge";
    case GraphViolation::Kind::DuplicateId: return "duplicate-id";
    case GraphViolation::Kind::ParentlessNode: return "parentless-node";
    case GraphViolation::Kind::InitialWithParent: return "initial-with-parent";
  }
  return "unknown";
}

ThoughtGraph ThoughtGraph::from_parts(AgentId owner, std::vector<ThoughtNode> nodes,
                                      std::vector<ThoughtEdge> edges) {
  ThoughtGraph graph(std::move(owner));
  for (auto& node : nodes) graph.push_node(std::move(node));
  graph.edges_ = std::move(edges);
  return graph;
}

void ThoughtGraph::push_node(ThoughtNode node) {
  index_.try_emplace(node.id, nodes_.size());
  nodes_.push_back(std::move(node));
}

const ThoughtNode* ThoughtGraph::find(NodeId id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

std::size_t ThoughtGraph::in_degree(NodeId id) const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [id](const ThoughtEdge& e) { return e.to == id; }));
}

std::size_t ThoughtGraph::out_degree(NodeId id) const {
  return static_cast<std::size_t>(std::count_if(
      edges_.begin(), edges_.end(), [id](const ThoughtEdge& e) { return e.from == id; }));
}

std::optional<NodeId> ThoughtGraph::latest_of_kind(NodeKind kind) const {
  std::optional<NodeId> best;
  for (const auto& node : nodes_) {
    if (node.kind == kind && (!best || node.id > *best)) best = node.id;
  }
  return best;
}

std::optional<NodeId> ThoughtGraph::latest() const {
  std::optional<NodeId> best;
  for (const auto& node : nodes_) {
    if (!best || node.id > *best) best = node.id;
  }
  return best;
}

void ThoughtGraph::absorb(const ThoughtGraph& other) {
  for (const auto& node : other.nodes_) {
    if (contains(node.id)) {
      throw Error(ErrorCode::InvalidInput,
                  "node id " + std::to_string(node.id) + " already present in graph of " + owner_);
    }
  }
  for (const auto& node : other.nodes_) push_node(node);
  edges_.insert(edges_.end(), other.edges_.begin(), other.edges_.end());
}

ThoughtGraph new_graph(const AgentId& owner, std::span<const std::string> conditions, int turn,
                       NodeIdAllocator& ids) {
  if (conditions.empty()) {
    throw Error(ErrorCode::InvalidInput, "graph for " + owner + " needs at least one condition");
  }
  ThoughtGraph graph(owner);
  for (const auto& condition : conditions) {
    add_thought(graph, ThoughtNode{ids.next(), NodeKind::Initial, condition, owner, turn}, {});
  }
  return graph;
}

NodeId add_thought(ThoughtGraph& graph, ThoughtNode node, std::span<const NodeId> parents) {
  if (graph.contains(node.id)) {
    throw Error(ErrorCode::InvalidInput, "node id " + std::to_string(node.id) + " already in use");
  }
  if (node.kind == NodeKind::Initial && !parents.empty()) {
    throw Error(ErrorCode::InvalidInput, "Initial nodes take no parents");
  }
  if (node.kind != NodeKind::Initial && parents.empty()) {
    throw Error(ErrorCode::InvalidInput,
                std::string(to_string(node.kind)) + " node requires at least one parent");
  }
  for (NodeId parent : parents) {
    if (!graph.contains(parent)) {
      throw Error(ErrorCode::UnknownNode, "unknown parent node " + std::to_string(parent));
    }
  }
  // New node has no outgoing edges, so no cycle can form.
  const NodeId id = node.id;
  graph.push_node(std::move(node));
  std::set<NodeId> seen;
  for (NodeId parent : parents) {
    if (seen.insert(parent).second) graph.edges_.push_back(ThoughtEdge{parent, id});
  }
  return id;
}

std::vector<ThoughtNode> collect_outputs(const ThoughtGraph& graph, int turn) {
  std::vector<ThoughtNode> outputs;
  for (const auto& node : graph.nodes()) {
    if (node.kind == NodeKind::Output && node.turn == turn) outputs.push_back(node);
  }
  std::sort(outputs.begin(), outputs.end(),
            [](const ThoughtNode& a, const ThoughtNode& b) { return a.id < b.id; });
  return outputs;
}

std::vector<GraphViolation> validate(const ThoughtGraph& graph) {
  using Kind = GraphViolation::Kind;
  std::vector<GraphViolation> violations;

  std::set<NodeId> ids;
  for (const auto& node : graph.nodes()) {
    if (!ids.insert(node.id).second) {
      violations.push_back({Kind::DuplicateId, "node " + std::to_string(node.id)});
    }
  }

  std::map<NodeId, std::vector<NodeId>> children;
  std::map<NodeId, std::size_t> in_degree;
  for (const auto& edge : graph.edges()) {
    const std::string label = std::to_string(edge.from) + "->" + std::to_string(edge.to);
    if (edge.from == edge.to) {
      violations.push_back({Kind::SelfLoop, label});
      continue;
    }
    if (!ids.contains(edge.from) || !ids.contains(edge.to)) {
      violations.push_back({Kind::DanglingEdge, label});
      continue;
    }
    children[edge.from].push_back(edge.to);
    ++in_degree[edge.to];
  }

  for (const auto& node : graph.nodes()) {
    const std::size_t degree = in_degree.contains(node.id) ? in_degree[node.id] : 0;
    if (node.kind == NodeKind::Initial && degree > 0) {
      violations.push_back({Kind::InitialWithParent, "node " + std::to_string(node.id)});
    } else if (node.kind != NodeKind::Initial && degree == 0) {
      violations.push_back({Kind::ParentlessNode, "node " + std::to_string(node.id)});
    }
  }

  // Kahn's algorithm over the well-formed edges; leftovers sit on a cycle.
  std::map<NodeId, std::size_t> remaining = in_degree;
  std::vector<NodeId> ready;
  for (NodeId id : ids) {
    if (!remaining.contains(id) || remaining[id] == 0) ready.push_back(id);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const NodeId id = ready.back();
    ready.pop_back();
    ++visited;
    for (NodeId child : children[id]) {
      if (--remaining[child] == 0) ready.push_back(child);
    }
  }
  if (visited < ids.size()) {
    std::vector<std::string> stuck;
    for (const auto& [id, degree] : remaining) {
      if (degree > 0) stuck.push_back(std::to_string(id));
    }
    violations.push_back({Kind::Cycle, "nodes " + join(stuck, ",")});
  }
  return violations;
}

}  // namespace cgot
