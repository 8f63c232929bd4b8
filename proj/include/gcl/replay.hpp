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

// Replay buffer and the per-class samplers that fill it.
//
// Samplers work on "class points": a matrix whose row k is the embedding (or
// feature vector) of node ids[k]. They return global ids in selection order,
// so truncating a bucket keeps its earliest picks.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gcl/graph.hpp"

namespace gcl {

class ReplayBuffer {
 public:
  explicit ReplayBuffer(int capacity = 0);

  int capacity() const { return capacity_; }
  /// Replaces the bucket of `label`. Throws if the result would exceed the
  /// capacity or share a node with another bucket.
  void set_bucket(int label, std::vector<GlobalId> nodes);
  /// Keeps the first `size` entries of the bucket.
  void truncate(int label, int size);

  bool has_bucket(int label) const { return buckets_.contains(label); }
  const std::vector<GlobalId>& bucket(int label) const;
  std::vector<int> classes() const;
  std::vector<GlobalId> all_nodes() const;
  std::size_t size() const;
  bool contains(GlobalId id) const;
  std::optional<int> class_of(GlobalId id) const;

 private:
  int capacity_ = 0;
  std::map<int, std::vector<GlobalId>> buckets_;
};

struct CoverageSpec {
  double r = 0.3;
  void validate() const;
};

/// Mean Euclidean distance over unordered pairs of rows. Needs >= 2 rows.
double class_pair_mean_distance(const Matrix& points);

/// Row indices j with dist(points_i, points_j) < radius, plus i itself.
std::vector<int> coverage(const Matrix& points, int i, double radius);

/// Largest-remainder allocation of `capacity` slots proportional to class
/// size, with every class receiving at least one slot. Remainder ties go to
/// the larger class, then the smaller label.
std::map<int, int> buffer_quota(const std::map<int, int>& class_sizes, int capacity);

/// Row order by distance to the row mean, ties by id.
std::vector<int> mean_feature_order(const Matrix& points, std::span<const GlobalId> ids);

/// Greedy union-coverage selection. If every node is covered before `quota`
/// picks, the remaining slots follow `fill_order` (row indices; defaults to
/// mean_feature_order of `points`).
std::vector<GlobalId> select_buffer_cd(const Matrix& points, std::span<const GlobalId> ids,
                                       int quota, const CoverageSpec& spec,
                                       std::span<const int> fill_order = {});

std::vector<GlobalId> select_buffer_mf(const Matrix& points, std::span<const GlobalId> ids,
                                       int quota);

/// Prefers nodes with the fewest `others` rows within r * E of the class.
std::vector<GlobalId> select_buffer_cm(const Matrix& points, std::span<const GlobalId> ids,
                                       const Matrix& others, int quota, const CoverageSpec& spec);

std::vector<GlobalId> select_buffer_random(std::span<const GlobalId> ids, int quota, Rng& rng);

struct KMeansResult {
  Matrix centroids;
  std::vector<int> assignment;
};

/// Lloyd iterations from `k` distinct seeded rows.
KMeansResult kmeans(const Matrix& points, int k, int iterations, Rng& rng);

/// k-means with k = min(5, quota), then the nearest member of each cluster,
/// the second nearest, and so on until the quota is met.
std::vector<GlobalId> select_buffer_clustering(const Matrix& points, std::span<const GlobalId> ids,
                                               int quota, Rng& rng, int max_clusters = 5,
                                               int iterations = 50);

/// Rows "class,node,method".
void write_buffer_csv(const std::filesystem::path& path, const ReplayBuffer& buffer,
                      const std::string& method);

struct HomophilyStat {
  double mean = 0.0;
  double stddev = 0.0;  // population
  int count = 0;
};

/// Per-class homophily of buffered nodes in `graph`; empty buckets map to
/// nullopt. Throws std::out_of_range for buffered nodes missing from `graph`.
std::map<int, std::optional<HomophilyStat>> buffer_homophily_table(const Graph& graph,
                                                                   const ReplayBuffer& buffer);

/// Rows of `graph`'s features for `ids`, densified.
Matrix gather_features(const Graph& graph, std::span<const GlobalId> ids);
/// Rows of `embeddings` (indexed by local node of `graph`) for `ids`.
Matrix gather_rows(const Graph& graph, const Matrix& embeddings, std::span<const GlobalId> ids);

}  // namespace gcl
