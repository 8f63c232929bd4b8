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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "fixtures.hpp"
#include "gcl/dataset.hpp"
#include "gcl/graph.hpp"
#include "gcl/task_stream.hpp"

using namespace gcl;
namespace fs = std::filesystem;

namespace {

SparseMatrix identity_features(int n) {
  SparseMatrix x(n, n);
  x.setIdentity();
  return x;
}

Graph labelled_graph(std::vector<int> labels, std::vector<Edge> edges) {
  const int n = static_cast<int>(labels.size());
  return Graph(n, std::move(edges), identity_features(n), std::move(labels));
}

fs::path temp_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("gcl_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("graph merges duplicate edges and drops self-loops") {
  Graph g = labelled_graph({0, 0, 1}, {{0, 1}, {1, 0}, {2, 2}, {1, 2}});
  CHECK(g.num_edges() == 2);
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(g.has_edge(2, 2));
  CHECK(g.degree(1) == 2);
}

TEST_CASE("graph rejects malformed input") {
  CHECK_THROWS_AS(labelled_graph({0, 1}, {{0, 5}}), DatasetError);
  CHECK_THROWS_AS(Graph(3, {}, identity_features(2), {0, 0, 0}), DatasetError);
  CHECK_THROWS_AS(Graph(2, {}, identity_features(2), {0}), DatasetError);
}

TEST_CASE("homophily ratio") {
  // Node 0 has label 1 and neighbours labelled 1, 1, 0.
  Graph g = labelled_graph({1, 1, 1, 0, 1}, {{0, 1}, {0, 2}, {0, 3}});
  CHECK(homophily_ratio(g, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(homophily_ratio(g, 1) == 1.0);
  CHECK(homophily_ratio(g, 4) == 1.0);  // isolated
  CHECK_THROWS_AS(homophily_ratio(g, 9), std::out_of_range);
}

TEST_CASE("homophily ratio is invariant under label permutation") {
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    Graph g = testing::random_graph(12, 3, 4, 0.3, rng);
    std::vector<int> perm = {2, 0, 3, 1};
    std::vector<int> relabelled;
    for (int y : g.labels()) relabelled.push_back(perm[static_cast<std::size_t>(y)]);
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    Graph h(g.num_nodes(), edges, g.features(), relabelled);
    for (int v = 0; v < g.num_nodes(); ++v) CHECK(homophily_ratio(g, v) == homophily_ratio(h, v));
  }
}

TEST_CASE("task stream excludes edges to future classes") {
  Graph g = labelled_graph({0, 1, 2, 3}, {{0, 2}, {0, 1}});
  auto snaps = build_snapshots(g, 2, 2);
  REQUIRE(snaps.size() == 2);
  CHECK(snaps[0].num_nodes() == 2);
  REQUIRE(snaps[0].num_edges() == 1);
  CHECK(snaps[0].edges()[0] == Edge{0, 1});
  CHECK(snaps[1].num_edges() == 2);
}

TEST_CASE("single-task stream equals induced subgraph") {
  Rng rng(5);
  Graph g = testing::random_graph(30, 3, 2, 0.2, rng);
  auto snaps = build_snapshots(g, 2, 1);
  std::vector<int> all(static_cast<std::size_t>(g.num_nodes()));
  for (int i = 0; i < g.num_nodes(); ++i) all[static_cast<std::size_t>(i)] = i;
  Graph sub = g.induced_subgraph(all);
  CHECK(snaps[0].num_edges() == sub.num_edges());
  CHECK(std::equal(snaps[0].edges().begin(), snaps[0].edges().end(), sub.edges().begin()));
}

TEST_CASE("task stream invariants on a synthetic graph") {
  SyntheticSpec spec = SyntheticSpec::cora_like(1);
  Graph full = generate_synthetic(spec);
  SplitSpec split;
  TaskStream s = build_task_stream(full, 2, 3, split);
  REQUIRE(s.num_tasks() == 3);
  std::set<int> seen_classes;
  for (int t = 0; t < s.num_tasks(); ++t) {
    const Task& task = s.task(t);
    for (int c : task.classes) CHECK(seen_classes.insert(c).second);  // disjoint
    for (int v = 0; v < task.graph.num_nodes(); ++v) CHECK(seen_classes.contains(task.graph.label(v)));
    if (t > 0) {
      const Graph& prev = s.task(t - 1).graph;
      for (GlobalId id : prev.node_ids()) CHECK(task.graph.local_index(id).has_value());
      for (const Edge& e : prev.edges()) {
        const int a = task.graph.require_local(prev.global_id(e.u));
        const int b = task.graph.require_local(prev.global_id(e.v));
        CHECK(task.graph.has_edge(a, b));
      }
    }
    // Splits are disjoint and cover only this task's classes.
    std::set<GlobalId> ids;
    for (const auto* part : {&task.train, &task.val, &task.test}) {
      for (GlobalId id : *part) {
        CHECK(ids.insert(id).second);
        const int label = full.label(full.require_local(id));
        CHECK(std::find(task.classes.begin(), task.classes.end(), label) != task.classes.end());
      }
    }
  }
  CHECK(s.column_of(s.class_order()[3]) == 3);
  CHECK(s.num_seen_classes(1) == 4);
}

TEST_CASE("task stream is deterministic and validates its inputs") {
  Graph full = generate_synthetic(SyntheticSpec::citeseer_like(2));
  SplitSpec split;
  split.seed = 11;
  TaskStream a = build_task_stream(full, 2, 3, split);
  TaskStream b = build_task_stream(full, 2, 3, split);
  for (int t = 0; t < 3; ++t) {
    CHECK(a.task(t).train == b.task(t).train);
    CHECK(a.task(t).test == b.task(t).test);
  }
  CHECK_THROWS_AS(build_task_stream(full, 4, 2, split), ConfigError);
  SplitSpec bad;
  bad.train_frac = 0.7;
  CHECK_THROWS_AS(build_task_stream(full, 2, 3, bad), ConfigError);
  Graph tiny = labelled_graph({0, 0, 1, 1}, {});
  CHECK_THROWS_AS(build_task_stream(tiny, 2, 1, SplitSpec{}), DatasetError);
}

TEST_CASE("dataset directories round-trip and are validated") {
  Rng rng(9);
  Graph g = testing::random_graph(15, 4, 3, 0.3, rng);
  const fs::path dir = temp_dir("roundtrip");
  save_dataset(dir, "tiny", g);
  LoadedDataset d = load_dataset(dir);
  CHECK(d.manifest.name == "tiny");
  CHECK(d.graph.num_nodes() == g.num_nodes());
  CHECK(d.graph.num_edges() == g.num_edges());
  CHECK(d.graph.features().isApprox(g.features()));
  CHECK(std::equal(d.graph.labels().begin(), d.graph.labels().end(), g.labels().begin()));
  CHECK(d.warnings.empty());

  SUBCASE("empty edge file gives an edgeless graph with a warning") {
    std::ofstream(dir / "edges.csv", std::ios::trunc).close();
    LoadedDataset e = load_dataset(dir);
    CHECK(e.graph.num_edges() == 0);
    CHECK(e.warnings.size() == 1);
  }
  SUBCASE("feature row count mismatch is a dataset error") {
    std::ofstream(dir / "features.csv", std::ios::app) << "0,0,0,0\n";
    CHECK_THROWS_AS(load_dataset(dir), DatasetError);
  }
  SUBCASE("duplicate and reversed rows are merged") {
    std::ofstream(dir / "edges.csv", std::ios::trunc) << "0,1\n1,0\n2,2\n";
    LoadedDataset e = load_dataset(dir);
    CHECK(e.graph.num_edges() == 1);
    CHECK(e.duplicate_edges == 1);
    CHECK(e.self_loops == 1);
  }
  fs::remove_all(dir);
}

TEST_CASE("synthetic presets match the published dataset sizes") {
  Graph cora = generate_synthetic(SyntheticSpec::cora_like());
  CHECK(cora.num_nodes() == 2708);
  CHECK(cora.num_edges() == 5429);
  CHECK(cora.num_features() == 1433);
  CHECK(cora.distinct_labels().size() == 7);
  Graph citeseer = generate_synthetic(SyntheticSpec::citeseer_like());
  CHECK(citeseer.num_nodes() == 3312);
  CHECK(citeseer.num_edges() == 4732);
  CHECK(citeseer.num_features() == 3703);
  CHECK(citeseer.distinct_labels().size() == 6);
  CHECK(mean_homophily(cora) > mean_homophily(citeseer));
}
