// Copyright 2026 The gcl Authors.
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

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gcl/common.hpp"

namespace gcl {

/// Undirected edge between two local node indices, stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  static Edge canonical(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  auto operator<=>(const Edge&) const = default;
};

/// Immutable attributed graph snapshot.
///
/// Nodes are addressed by local index in [0, num_nodes). `node_ids` maps each
/// local index to its stable global id so that a node keeps its identity when
/// it appears in several task snapshots. Edges are undirected, deduplicated
/// and never self-loops; message passing adds self-loops on its own.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an arbitrary edge list. Duplicate edges (in either
  /// orientation) are merged and self-loops dropped. Throws DatasetError on
  /// out-of-range endpoints or shape mismatches.
  Graph(int num_nodes, std::vector<Edge> edges, SparseMatrix features,
        std::vector<int> labels, std::vector<GlobalId> node_ids = {});

  int num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  int num_features() const { return static_cast<int>(features_.cols()); }

  std::span<const Edge> edges() const { return edges_; }
  /// Sorted ascending.
  std::span<const int> neighbors(int v) const;
  int degree(int v) const;
  bool has_edge(int u, int v) const;

  const SparseMatrix& features() const { return features_; }
  std::span<const int> labels() const { return labels_; }
  int label(int v) const { return labels_.at(static_cast<std::size_t>(v)); }
  std::span<const GlobalId> node_ids() const { return node_ids_; }
  GlobalId global_id(int v) const { return node_ids_.at(static_cast<std::size_t>(v)); }
  std::optional<int> local_index(GlobalId id) const;
  /// Like local_index but throws std::out_of_range for unknown ids.
  int require_local(GlobalId id) const;

  /// Distinct labels in ascending order.
  std::vector<int> distinct_labels() const;
  int num_isolated() const;

  /// Same nodes, features and labels with a replaced edge set.
  Graph with_edges(std::vector<Edge> edges) const;

  /// Subgraph induced by `nodes` (local indices, any order). The result's
  /// local order follows ascending local index of the parent; global ids are
  /// preserved.
  Graph induced_subgraph(std::span<const int> nodes) const;

 private:
  void build_adjacency();

  int num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<int> adjacency_;
  SparseMatrix features_;
  std::vector<int> labels_;
  std::vector<GlobalId> node_ids_;
  std::unordered_map<GlobalId, int> local_of_;
};

/// Fraction of `node`'s neighbours sharing its label. Isolated nodes report
/// 1.0 so that deleting every edge can never look like a homophily gain.
double homophily_ratio(const Graph& graph, int node);

/// Mean homophily over every node of the graph.
double mean_homophily(const Graph& graph);

}  // namespace gcl
