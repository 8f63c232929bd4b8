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

// Edge rewiring around replayed nodes.

#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "gcl/graph.hpp"
#include "gcl/replay.hpp"

namespace gcl {

struct Candidate {
  GlobalId id = 0;
  double distance = 0.0;
};

/// Replayed node -> nearest nodes, ascending distance (ties by id).
using CandidateSets = std::map<GlobalId, std::vector<Candidate>>;

/// The `k` nearest nodes of `graph` to each replayed node, measured on
/// `embeddings` (rows = local nodes of `graph`). Replayed nodes absent from
/// `graph` get no entry.
CandidateSets build_candidates(const Graph& graph, const Matrix& embeddings,
                               std::span<const GlobalId> replayed, int k);

/// Cosine link scores from link-predictor embeddings of `graph`.
class LinkScorer {
 public:
  LinkScorer(const Graph& graph, Matrix embeddings);
  double score(GlobalId a, GlobalId b) const;
  const Matrix& embeddings() const { return z_; }

 private:
  const Graph* graph_;
  Matrix z_;
};

using GlobalEdge = std::pair<GlobalId, GlobalId>;  // first < second

inline GlobalEdge global_edge(GlobalId a, GlobalId b) {
  return a < b ? GlobalEdge{a, b} : GlobalEdge{b, a};
}

struct EdgeDelta {
  bool added = true;
  GlobalId u = 0;
  GlobalId v = 0;
  double score = 0.0;
  int task = 0;
};

struct RefinedAdjacency {
  std::set<GlobalEdge> added;
  std::set<GlobalEdge> deleted;
  /// Edges in some replayed node's top-N set, exempt from deletion.
  std::set<GlobalEdge> protected_edges;
  std::vector<EdgeDelta> log;

  void merge(const RefinedAdjacency& other);
};

/// Connects each replayed node to its `n` best-scoring candidates.
RefinedAdjacency add_edges(const Graph& graph, std::span<const GlobalId> replayed,
                           const CandidateSets& candidates, const LinkScorer& scorer, int n,
                           int task = 0);

/// Drops original edges (b, j) of replayed b with score <= tau unless protected.
RefinedAdjacency delete_edges(const Graph& graph, std::span<const GlobalId> replayed,
                              const LinkScorer& scorer, double tau,
                              const std::set<GlobalEdge>& protected_edges = {}, int task = 0);

struct RefineResult {
  Graph graph;
  RefinedAdjacency delta;
  std::vector<GlobalId> refined_nodes;
};

/// Additions then deletions on a seeded `sl_ratio` share of `replayed`.
RefineResult refine_structure(const Graph& graph, std::span<const GlobalId> replayed,
                              const CandidateSets& candidates, const LinkScorer& scorer, int n,
                              double tau, double sl_ratio, Rng& rng, int task = 0);

/// Links every replayed node to `n` random same-class training nodes.
RefinedAdjacency homophily_boost_edges(const Graph& graph, const ReplayBuffer& buffer,
                                       const std::map<int, std::vector<GlobalId>>& train_pool,
                                       int n, Rng& rng, int task = 0);

/// `graph` with `delta` applied; edges with an endpoint outside `graph` are skipped.
Graph apply_delta(const Graph& graph, const RefinedAdjacency& delta);

/// Rows "op,u,v,score,task" with op in {add, del}.
void write_delta_csv(const std::filesystem::path& path, std::span<const EdgeDelta> log);

}  // namespace gcl
