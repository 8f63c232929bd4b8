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

#include "gcl/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace gcl {

std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
  // FNV-1a over the name, mixed with the master seed through splitmix64.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (h | 1ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Graph::Graph(int num_nodes, std::vector<Edge> edges, SparseMatrix features,
             std::vector<int> labels, std::vector<GlobalId> node_ids)
    : num_nodes_(num_nodes),
      features_(std::move(features)),
      labels_(std::move(labels)),
      node_ids_(std::move(node_ids)) {
  if (num_nodes < 0) throw DatasetError("negative node count");
  if (features_.rows() != num_nodes) {
    throw DatasetError("feature rows (" + std::to_string(features_.rows()) +
                       ") != num_nodes (" + std::to_string(num_nodes) + ")");
  }
  if (static_cast<int>(labels_.size()) != num_nodes) {
    throw DatasetError("label count (" + std::to_string(labels_.size()) +
                       ") != num_nodes (" + std::to_string(num_nodes) + ")");
  }
  if (node_ids_.empty()) {
    node_ids_.resize(static_cast<std::size_t>(num_nodes));
    std::iota(node_ids_.begin(), node_ids_.end(), 0);
  } else if (static_cast<int>(node_ids_.size()) != num_nodes) {
    throw DatasetError("node id count != num_nodes");
  }
  local_of_.reserve(node_ids_.size());
  for (int i = 0; i < num_nodes; ++i) {
    if (!local_of_.emplace(node_ids_[static_cast<std::size_t>(i)], i).second) {
      throw DatasetError("duplicate global node id");
    }
  }
  edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= num_nodes || e.v >= num_nodes) {
      throw DatasetError("edge endpoint out of range: (" + std::to_string(e.u) + "," +
                         std::to_string(e.v) + ")");
    }
    if (e.u == e.v) continue;
    edges_.push_back(Edge::canonical(e.u, e.v));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  build_adjacency();
}

void Graph::build_adjacency() {
  std::vector<int> deg(static_cast<std::size_t>(num_nodes_), 0);
  for (const Edge& e : edges_) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  offsets_.assign(static_cast<std::size_t>(num_nodes_) + 1, 0);
  for (int i = 0; i < num_nodes_; ++i) {
    offsets_[static_cast<std::size_t>(i) + 1] =
        offsets_[static_cast<std::size_t>(i)] + static_cast<std::size_t>(deg[static_cast<std::size_t>(i)]);
  }
  adjacency_.assign(offsets_.back(), 0);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[cursor[static_cast<std::size_t>(e.u)]++] = e.v;
    adjacency_[cursor[static_cast<std::size_t>(e.v)]++] = e.u;
  }
  for (int i = 0; i < num_nodes_; ++i) {
    auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[static_cast<std::size_t>(i)]);
    auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[static_cast<std::size_t>(i) + 1]);
    std::sort(first, last);
  }
}

std::span<const int> Graph::neighbors(int v) const {
  if (v < 0 || v >= num_nodes_) throw std::out_of_range("node index out of range");
  const auto begin = offsets_[static_cast<std::size_t>(v)];
  const auto end = offsets_[static_cast<std::size_t>(v) + 1];
  return {adjacency_.data() + begin, end - begin};
}

int Graph::degree(int v) const { return static_cast<int>(neighbors(v).size()); }

bool Graph::has_edge(int u, int v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<int> Graph::local_index(GlobalId id) const {
  auto it = local_of_.find(id);
  if (it == local_of_.end()) return std::nullopt;
  return it->second;
}

int Graph::require_local(GlobalId id) const {
  auto local = local_index(id);
  if (!local) throw std::out_of_range("unknown node id " + std::to_string(id));
  return *local;
}

std::vector<int> Graph::distinct_labels() const {
  std::set<int> s(labels_.begin(), labels_.end());
  return {s.begin(), s.end()};
}

int Graph::num_isolated() const {
  int count = 0;
  for (int v = 0; v < num_nodes_; ++v) count += degree(v) == 0 ? 1 : 0;
  return count;
}

Graph Graph::with_edges(std::vector<Edge> edges) const {
  return Graph(num_nodes_, std::move(edges), features_, labels_, node_ids_);
}

Graph Graph::induced_subgraph(std::span<const int> nodes) const {
  std::vector<int> keep(nodes.begin(), nodes.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  std::vector<int> remap(static_cast<std::size_t>(num_nodes_), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= num_nodes_) throw std::out_of_range("subgraph node out of range");
    remap[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
  }
  std::vector<Edge> edges;
  for (const Edge& e : edges_) {
    const int a = remap[static_cast<std::size_t>(e.u)];
    const int b = remap[static_cast<std::size_t>(e.v)];
    if (a >= 0 && b >= 0) edges.push_back(Edge::canonical(a, b));
  }
  const int n = static_cast<int>(keep.size());
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<int> labels(keep.size());
  std::vector<GlobalId> ids(keep.size());
  for (int i = 0; i < n; ++i) {
    const int src = keep[static_cast<std::size_t>(i)];
    for (SparseMatrix::InnerIterator it(features_, src); it; ++it) {
      triplets.emplace_back(i, static_cast<int>(it.col()), it.value());
    }
    labels[static_cast<std::size_t>(i)] = labels_[static_cast<std::size_t>(src)];
    ids[static_cast<std::size_t>(i)] = node_ids_[static_cast<std::size_t>(src)];
  }
  SparseMatrix features(n, features_.cols());
  features.setFromTriplets(triplets.begin(), triplets.end());
  return Graph(n, std::move(edges), std::move(features), std::move(labels), std::move(ids));
}

double homophily_ratio(const Graph& graph, int node) {
  if (node < 0 || node >= graph.num_nodes()) {
    throw std::out_of_range("unknown node " + std::to_string(node));
  }
  const auto nb = graph.neighbors(node);
  if (nb.empty()) return 1.0;
  const int own = graph.label(node);
  const auto same = std::count_if(nb.begin(), nb.end(),
                                  [&](int j) { return graph.label(j) == own; });
  return static_cast<double>(same) / static_cast<double>(nb.size());
}

double mean_homophily(const Graph& graph) {
  if (graph.num_nodes() == 0) return 1.0;
  double sum = 0.0;
  for (int v = 0; v < graph.num_nodes(); ++v) sum += homophily_ratio(graph, v);
  return sum / graph.num_nodes();
}

}  // namespace gcl
