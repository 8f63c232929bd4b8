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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gcl/graph.hpp"

namespace gcl {

// Dataset directory layout:
//   manifest.json  {"name", "num_nodes", "num_features", "num_classes"}
//   edges.csv      two integer columns per row, one undirected edge, no header
//   features.csv   num_nodes rows of num_features real columns
//   labels.csv     one integer class id per row

struct DatasetManifest {
  std::string name;
  int num_nodes = 0;
  int num_features = 0;
  int num_classes = 0;
};

struct LoadedDataset {
  DatasetManifest manifest;
  Graph graph;
  std::size_t raw_edge_rows = 0;     // rows in edges.csv
  std::size_t duplicate_edges = 0;   // merged duplicates (either orientation)
  std::size_t self_loops = 0;        // dropped (u,u) rows
  std::vector<std::string> warnings;
};

/// Loads and validates a dataset directory. Throws DatasetError with the first
/// violated constraint. Directed inputs are symmetrised.
LoadedDataset load_dataset(const std::filesystem::path& dir);

/// Writes `graph` in the dataset directory format (creating `dir`).
void save_dataset(const std::filesystem::path& dir, const std::string& name,
                  const Graph& graph);

/// Parameters of the Planetoid-like synthetic generator: a degree-corrected
/// stochastic block model over classes with sub-communities, and sparse binary
/// bag-of-words features drawn from class and sub-community topics.
struct SyntheticSpec {
  std::string name = "synthetic";
  std::vector<int> class_sizes;
  int num_edges = 0;
  int num_features = 0;
  double homophily = 0.8;           // expected fraction of intra-class edges
  int subclusters_per_class = 3;
  double subcluster_affinity = 0.6; // intra-class edges that stay in-subcluster
  double words_per_node = 18.0;
  int topic_words_per_class = 60;
  int topic_words_per_subcluster = 25;
  double class_topic_prob = 0.25;    // word drawn from the class topic
  double subcluster_topic_prob = 0.15;
  double degree_exponent = 2.5;      // power-law exponent of node propensity
  std::uint64_t seed = 0;

  /// Stand-in with Cora's published size (2708 nodes, 5429 edges, 1433
  /// features, 7 classes) and homophily.
  static SyntheticSpec cora_like(std::uint64_t seed = 0);
  /// Stand-in with Citeseer's published size (3312 nodes, 4732 edges, 3703
  /// features, 6 classes) and homophily.
  static SyntheticSpec citeseer_like(std::uint64_t seed = 0);
};

/// Generates the graph described by `spec`. Deterministic in `spec.seed`.
Graph generate_synthetic(const SyntheticSpec& spec);

}  // namespace gcl
