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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cgot/types.hpp"

namespace cgot {

using NodeId = std::uint64_t;

enum class NodeKind { Initial, Intermediate, Output, CompositionMarker, SplitMarker };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

struct ThoughtNode {
  NodeId id = 0;
  NodeKind kind = NodeKind::Intermediate;
  std::string content;
  AgentId producer;
  int turn = 0;

  friend bool operator==(const ThoughtNode&, const ThoughtNode&) = default;
};

struct ThoughtEdge {
  NodeId from = 0;
  NodeId to = 0;

  friend auto operator<=>(const ThoughtEdge&, const ThoughtEdge&) = default;
};

/// Hands out run-scoped node ids. Ids only ever increase, so sorting by id
/// reproduces creation order.
class NodeIdAllocator {
 public:
  NodeId next() { return next_++; }
  NodeId peek() const { return next_; }

 private:
  NodeId next_ = 1;
};

/// An agent's inference DAG.
///
/// Mutation goes through new_graph/add_thought/absorb, which keep the graph
/// acyclic with every non-Initial node reachable from a parent. from_parts
/// builds an unchecked graph (e.g. from a deserialized snapshot); run
/// validate() on those.
class ThoughtGraph {
 public:
  ThoughtGraph() = default;
  explicit ThoughtGraph(AgentId owner) : owner_(std::move(owner)) {}

  static ThoughtGraph from_parts(AgentId owner, std::vector<ThoughtNode> nodes,
                                 std::vector<ThoughtEdge> edges);

  const AgentId& owner() const { return owner_; }
  void set_owner(AgentId owner) { owner_ = std::move(owner); }

  const std::vector<ThoughtNode>& nodes() const { return nodes_; }
  const std::vector<ThoughtEdge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool contains(NodeId id) const { return index_.contains(id); }
  const ThoughtNode* find(NodeId id) const;
  std::size_t in_degree(NodeId id) const;
  std::size_t out_degree(NodeId id) const;

  /// Highest-id node of the given kind.
  std::optional<NodeId> latest_of_kind(NodeKind kind) const;
  /// Highest-id node of any kind.
  std::optional<NodeId> latest() const;

  /// Disjoint union with `other`. Throws InvalidInput on an id collision.
  void absorb(const ThoughtGraph& other);

  friend NodeId add_thought(ThoughtGraph& graph, ThoughtNode node,
                            std::span<const NodeId> parents);

  friend bool operator==(const ThoughtGraph& a, const ThoughtGraph& b) {
    return a.owner_ == b.owner_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  void push_node(ThoughtNode node);

  AgentId owner_;
  std::vector<ThoughtNode> nodes_;
  std::vector<ThoughtEdge> edges_;
  // First occurrence wins; duplicates only exist in from_parts graphs.
  std::unordered_map<NodeId, std::size_t> index_;
};

/// One Initial node per condition, no edges. Throws InvalidInput when
/// `conditions` is empty.
ThoughtGraph new_graph(const AgentId& owner, std::span<const std::string> conditions, int turn,
                       NodeIdAllocator& ids);

/// Inserts `node` with an edge from every parent.
///
/// Throws UnknownNode for a missing parent, InvalidInput for a non-Initial
/// node without parents, an Initial node with parents, or a reused id.
NodeId add_thought(ThoughtGraph& graph, ThoughtNode node, std::span<const NodeId> parents);

/// Output nodes created at `turn`, ordered by id.
std::vector<ThoughtNode> collect_outputs(const ThoughtGraph& graph, int turn);

struct GraphViolation {
  enum class Kind { SelfLoop, Cycle, DanglingEdge, DuplicateId, ParentlessNode, InitialWithParent };
  Kind kind;
  std::string detail;
};

std::string_view to_string(GraphViolation::Kind kind);

/// Empty result means the graph is well formed.
std::vector<GraphViolation> validate(const ThoughtGraph& graph);

}  // namespace cgot
