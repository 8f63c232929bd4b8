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

#include "gcl/gsl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "gcl/nn.hpp"

namespace gcl {

CandidateSets build_candidates(const Graph& graph, const Matrix& embeddings,
                               std::span<const GlobalId> replayed, int k) {
  if (k < 0) throw ConfigError("candidate count K must be non-negative");
  if (embeddings.rows() != graph.num_nodes()) throw std::invalid_argument("embedding rows != graph nodes");
  CandidateSets out;
  for (GlobalId b : replayed) {
    const auto local = graph.local_index(b);
    if (!local) continue;
    std::vector<Candidate> all;
    all.reserve(static_cast<std::size_t>(graph.num_nodes()));
    for (int j = 0; j < graph.num_nodes(); ++j) {
      if (j == *local) continue;
      all.push_back({graph.global_id(j), (embeddings.row(*local) - embeddings.row(j)).norm()});
    }
    const auto keep = std::min(all.size(), static_cast<std::size_t>(k));
    auto by_distance = [](const Candidate& a, const Candidate& c) {
      if (a.distance != c.distance) return a.distance < c.distance;
      return a.id < c.id;
    };
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), by_distance);
    all.resize(keep);
    out[b] = std::move(all);
  }
  return out;
}

LinkScorer::LinkScorer(const Graph& graph, Matrix embeddings) : graph_(&graph), z_(std::move(embeddings)) {
  if (z_.rows() != graph.num_nodes()) throw std::invalid_argument("embedding rows != graph nodes");
}

double LinkScorer::score(GlobalId a, GlobalId b) const {
  return cosine_link_score(z_, graph_->require_local(a), graph_->require_local(b));
}

void RefinedAdjacency::merge(const RefinedAdjacency& other) {
  for (const auto& e : other.added) {
    deleted.erase(e);
    added.insert(e);
  }
  for (const auto& e : other.deleted) {
    added.erase(e);
    deleted.insert(e);
  }
  protected_edges.insert(other.protected_edges.begin(), other.protected_edges.end());
  log.insert(log.end(), other.log.begin(), other.log.end());
}

RefinedAdjacency add_edges(const Graph& graph, std::span<const GlobalId> replayed,
                           const CandidateSets& candidates, const LinkScorer& scorer, int n,
                           int task) {
  if (n < 0) throw ConfigError("N must be non-negative");
  RefinedAdjacency out;
  if (n == 0) return out;
  for (GlobalId b : replayed) {
    const auto local_b = graph.local_index(b);
    auto it = candidates.find(b);
    if (!local_b || it == candidates.end()) continue;
    std::vector<std::pair<double, GlobalId>> scored;
    for (const Candidate& c : it->second) {
      if (!graph.local_index(c.id)) continue;
      scored.emplace_back(scorer.score(b, c.id), c.id);
    }
    const auto keep = std::min(scored.size(), static_cast<std::size_t>(n));
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                      [](const auto& x, const auto& y) {
                        if (x.first != y.first) return x.first > y.first;
                        return x.second < y.second;
                      });
    for (std::size_t k = 0; k < keep; ++k) {
      const auto [score, c] = scored[k];
      const GlobalEdge e = global_edge(b, c);
      out.protected_edges.insert(e);
      if (graph.has_edge(*local_b, graph.require_local(c)) || out.added.contains(e)) continue;
      out.added.insert(e);
      out.log.push_back({true, e.first, e.second, score, task});
    }
  }
  return out;
}

RefinedAdjacency delete_edges(const Graph& graph, std::span<const GlobalId> replayed,
                              const LinkScorer& scorer, double tau,
                              const std::set<GlobalEdge>& protected_edges, int task) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("tau outside [0,1]");
  RefinedAdjacency out;
  for (GlobalId b : replayed) {
    const auto local_b = graph.local_index(b);
    if (!local_b) continue;
    for (int j : graph.neighbors(*local_b)) {
      const GlobalEdge e = global_edge(b, graph.global_id(j));
      if (protected_edges.contains(e) || out.deleted.contains(e)) continue;
      const double s = scorer.score(b, graph.global_id(j));
      if (s <= tau) {
        out.deleted.insert(e);
        out.log.push_back({false, e.first, e.second, s, task});
      }
    }
  }
  return out;
}

RefineResult refine_structure(const Graph& graph, std::span<const GlobalId> replayed,
                              const CandidateSets& candidates, const LinkScorer& scorer, int n,
                              double tau, double sl_ratio, Rng& rng, int task) {
  if (!(sl_ratio >= 0.0 && sl_ratio <= 1.0)) throw ConfigError("sl_ratio outside [0,1]");
  std::vector<GlobalId> nodes(replayed.begin(), replayed.end());
  std::sort(nodes.begin(), nodes.end());
  std::shuffle(nodes.begin(), nodes.end(), rng);
  const auto count = static_cast<std::size_t>(std::lround(sl_ratio * static_cast<double>(nodes.size())));
  nodes.resize(count);
  std::sort(nodes.begin(), nodes.end());

  RefineResult res;
  res.refined_nodes = nodes;
  res.delta = add_edges(graph, nodes, candidates, scorer, n, task);
  const RefinedAdjacency removed = delete_edges(graph, nodes, scorer, tau, res.delta.protected_edges, task);
  res.delta.merge(removed);
  res.graph = apply_delta(graph, res.delta);
  return res;
}

RefinedAdjacency homophily_boost_edges(const Graph& graph, const ReplayBuffer& buffer,
                                       const std::map<int, std::vector<GlobalId>>& train_pool,
                                       int n, Rng& rng, int task) {
  if (n < 0) throw ConfigError("N must be non-negative");
  RefinedAdjacency out;
  if (n == 0) return out;
  for (int cls : buffer.classes()) {
    auto pool_it = train_pool.find(cls);
    if (pool_it == train_pool.end()) continue;
    for (GlobalId b : buffer.bucket(cls)) {
      const auto local_b = graph.local_index(b);
      if (!local_b) continue;
      std::vector<GlobalId> pool;
      for (GlobalId id : pool_it->second) {
        if (id != b && graph.local_index(id)) pool.push_back(id);
      }
      std::sort(pool.begin(), pool.end());
      std::shuffle(pool.begin(), pool.end(), rng);
      pool.resize(std::min(pool.size(), static_cast<std::size_t>(n)));
      for (GlobalId c : pool) {
        const GlobalEdge e = global_edge(b, c);
        out.protected_edges.insert(e);
        if (graph.has_edge(*local_b, graph.require_local(c)) || out.added.contains(e)) continue;
        out.added.insert(e);
        out.log.push_back({true, e.first, e.second, 1.0, task});
      }
    }
  }
  return out;
}

Graph apply_delta(const Graph& graph, const RefinedAdjacency& delta) {
  std::vector<Edge> edges;
  edges.reserve(graph.num_edges() + delta.added.size());
  for (const Edge& e : graph.edges()) {
    if (!delta.deleted.contains(global_edge(graph.global_id(e.u), graph.global_id(e.v)))) {
      edges.push_back(e);
    }
  }
  for (const auto& [a, b] : delta.added) {
    const auto la = graph.local_index(a);
    const auto lb = graph.local_index(b);
    if (la && lb) edges.push_back(Edge::canonical(*la, *lb));
  }
  return graph.with_edges(std::move(edges));
}

void write_delta_csv(const std::filesystem::path& path, std::span<const EdgeDelta> log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  for (const auto& d : log) {
    out << (d.added ? "add" : "del") << ',' << d.u << ',' << d.v << ',' << d.score << ',' << d.task << '\n';
  }
}

}  // namespace gcl
